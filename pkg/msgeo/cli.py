"""
Command-line interface for msgeo.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 internal error.
"""
import argparse
import logging
import sys

from .algebra.exterior_algebra import to_scalar
from .config import config
from .data.problem_file import load_problem
from .errors import MsgeoError
from .services.database_service import DatabaseService
from .services.report_service import ReportService
from .services.verification_service import VerificationService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


def parse_point(text):
    """``name=value,name=value`` with rational values"""
    point = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise argparse.ArgumentTypeError(f"expected name=value, got '{item}'")
        try:
            point[name.strip()] = to_scalar(value.strip())
        except (TypeError, ValueError) as e:
            raise argparse.ArgumentTypeError(str(e)) from e
    return point


def build_parser():
    """Argument parser with one subparser per command"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('problem', help='Problem file, or sample:<name> for a built-in sample')
    common.add_argument('--json', action='store_true', help='Print the result as JSON')
    common.add_argument('--store', action='store_true', help='Record the run in the database (MSGEO_DB_URI)')
    common.add_argument('--save-json', dest='save_json', help='Also save the JSON result to this file')

    parser = argparse.ArgumentParser(
        prog="msgeo",
        description="Exact multisymplectic linear algebra and first-order field theory"
    )
    commands = parser.add_subparsers(dest='command', required=True, metavar='command')

    classify = commands.add_parser('classify', parents=[common], help='Classify a subspace')
    classify.add_argument('--subspace', required=True, help='Subspace name from the problem file')
    classify.add_argument('--l', type=int, help='Order l of the orthogonal complement (default k)')

    darboux = commands.add_parser('darboux', parents=[common], help='Darboux map onto the model')
    darboux.add_argument('--subspace', required=True, help='The subspace W')
    darboux.add_argument('--horizontal', help='Subspace E for the horizontal variant')
    darboux.add_argument('--r', type=int, help='Horizontality order (required with --horizontal)')

    commands.add_parser('el', parents=[common], help='Euler-Lagrange equations')
    commands.add_parser('de-donder', parents=[common], help='De Donder residuals for the file connection')
    commands.add_parser('legendre', parents=[common], help='Legendre maps and H when derivable')
    commands.add_parser('hamilton', parents=[common], help='Hamilton equations')
    for name, help_text in (('alpha', 'The alpha map at a point'), ('beta', 'The beta map at a point'),
                            ('nl', 'Equations of N_L, tangency check at a point')):
        sub = commands.add_parser(name, parents=[common], help=help_text)
        sub.add_argument('--point', type=parse_point, help='name=value,... (missing coordinates are 0)')
    commands.add_parser('nh', parents=[common], help='Equations of N_h')

    triple = commands.add_parser('verify-triple', parents=[common], help='Check N_L = N_h')
    triple.add_argument('--samples', type=int, default=config.default_samples,
                        help=f'Sample points per side (default: {config.default_samples})')
    triple.add_argument('--seed', type=int, default=config.default_seed,
                        help=f'Sampling seed (default: MSGEO_SEED or {config.default_seed})')
    triple.add_argument('--parallel', action='store_true', help='Evaluate samples on a thread pool')

    commands.add_parser('homotopy', parents=[common], help='Homotopy operator of a polynomial form')
    return parser


def parse_args(argv=None):
    """Parse command line arguments"""
    return build_parser().parse_args(argv)


def run_cli(argv=None):
    """Run the command-line interface"""
    args = parse_args(argv)
    service = VerificationService()
    reports = ReportService()
    problem = None
    result = None

    try:
        problem = load_problem(args.problem)
        result = service.run(args.command, problem, args)
        code = result.exit_code
    except MsgeoError as e:
        code = e.exit_code
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
    except Exception as e:
        logger.exception(f"Error running CLI: {e}")
        code = EXIT_INTERNAL

    if result is not None:
        if args.json:
            print(reports.to_json(result.to_json()))
        else:
            print(result.text)
        if args.save_json and not reports.save_to_json(result.to_json(), args.save_json):
            logger.error(f"Failed to save result to {args.save_json}")

    if args.store:
        if not DatabaseService().initialize_database():
            logger.error("Run store could not be initialized")
        elif not service.record_run(result, problem, command=args.command, exit_code=code):
            logger.error("Run was not stored")
    service.close()
    return code


if __name__ == "__main__":
    sys.exit(run_cli())
