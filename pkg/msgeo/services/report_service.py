"""
Report service.

Turns command results into the text and JSON shown on stdout, and saves JSON
reports to files.
"""
import json
import logging

logger = logging.getLogger(__name__)


class ReportService:
    """Service for rendering command results"""

    def to_json(self, payload):
        """Deterministic JSON text"""
        return json.dumps(payload, indent=2, sort_keys=True)

    def save_to_json(self, payload, filename):
        """
        Save a report to a JSON file.

        Args:
            payload: JSON-serializable report
            filename: Name of the file to save to

        Returns:
            True if successful
        """
        try:
            with open(filename, 'w') as f:
                f.write(self.to_json(payload))
                f.write("\n")
            logger.info(f"Saved report to {filename}")
            return True
        except Exception as e:
            logger.error(f"Error saving report to JSON: {e}")
            return False

    def format_equations_for_display(self, lines):
        return "\n".join(lines) if lines else "(no equations)"

    def format_flags_for_display(self, payload, keys):
        return "\n".join(f"{key}: {self._flag(payload[key])}" for key in keys)

    def format_mapping_for_display(self, mapping):
        return "\n".join(f"{name} = {value}" for name, value in mapping.items())

    def format_darboux_for_display(self, payload):
        """
        Format a serialized DarbouxResult for display.

        Args:
            payload: output of darboux_to_json

        Returns:
            Formatted string
        """
        model = payload["model"]
        output = []
        output.append("=" * 60)
        output.append(f"Model: n0={model['n0']} k={model['k']} r={model['r']} (dim {model['dim']})")
        output.append(f"Normalization: {payload['normalization']}")
        output.append(f"Iterations: {payload['iterations']}")
        output.append("psi:")
        for row in payload["psi"]:
            output.append("  [" + ", ".join(row) + "]")
        output.append("Darboux basis:")
        for entry in payload["darboux_basis"]:
            output.append(f"  {entry['label']}: (" + ", ".join(entry["vector"]) + ")")
        output.append(f"Relations hold: {self._flag(payload['relations_hold'])}")
        if "expansion_certified" in payload:
            output.append(f"Expansion certified: {self._flag(payload['expansion_certified'])}"
                          f" ({payload['expansion_terms']} terms)")
        output.append("=" * 60)
        return "\n".join(output)

    def format_triple_for_display(self, payload):
        """Format a TripleReport payload"""
        output = []
        output.append("=" * 60)
        output.append(f"Problem: {payload['problem']} (seed {payload['seed']})")
        output.append(f"H = {payload['hamiltonian']}")
        output.append(f"omega_identity: {self._flag(payload['omega_identity'])}")
        output.append(f"primitive_identity: {self._flag(payload['primitive_identity'])}")
        output.append(f"samples: {len(payload['samples'])}")
        output.append(f"max_residual: {payload['max_residual']:.3e} (tolerance {payload['tolerance']:.0e})")
        output.append(f"passed: {self._flag(payload['passed'])}")
        output.append("=" * 60)
        return "\n".join(output)

    @staticmethod
    def _flag(value):
        return "true" if value else "false"
