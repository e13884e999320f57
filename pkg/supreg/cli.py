"""
Command-line interface for the superregular matrix toolkit.

Every command writes one JSON object (schema_version "1") to stdout, or
JSON-lines when a search streams its matches; logs go to stderr.

Exit codes: 0 success, 1 valid negative result, 2 usage or input error,
3 internal error, 130 interrupted.
"""

import argparse
import json
import logging
import os
import sys
import time
import traceback
from typing import Callable, Dict, List, Optional

from . import __version__
from .constructions import DEFAULT_ORDER, construct, witness, witnesses
from .core import TABLES, TableReproducer
from .exceptions import (
    ConstructionFailed, DeadEnd, FieldError, FieldTooSmall, MatrixIndexError, NoWitness,
    ParseError, PrefixLengthMismatch, VariantInapplicable,
)
from .forbidden import forbidden_set
from .prime_field import PrimeField, is_prime, parse_rational, rational_alias
from .search import MODES, SearchTask, conjecture_scan, exhaustive, greedy_extend, min_field, \
    min_forbidden, random_prefix
from .symbolic import census, distinct_polynomials, format_polys
from .toeplitz import ToeplitzLT, from_first_column, is_superregular, is_superregular_incremental
from .utils import ConfigUtils, PrimeUtils, ReportUtils, jsonable, parse_csv_list

logger = logging.getLogger(__name__)

SCHEMA_VERSION = '1'

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3
EXIT_INTERRUPTED = 130

USAGE_ERRORS = (
    ParseError, FieldError, FieldTooSmall, VariantInapplicable, NoWitness,
    PrefixLengthMismatch, MatrixIndexError, FileNotFoundError, ValueError,
)
NEGATIVE_ERRORS = (ConstructionFailed,)

_HANDLER_TAG = '_supreg_handler'


def setup_logging(verbose: bool = False, log_file: Optional[str] = None, quiet: bool = False):
    """Setup logging on stderr; stdout carries the payload."""
    if quiet:
        level = logging.ERROR
    else:
        level = logging.DEBUG if verbose else logging.INFO

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    for handler in list(root_logger.handlers):
        if getattr(handler, _HANDLER_TAG, False):
            root_logger.removeHandler(handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    setattr(console_handler, _HANDLER_TAG, True)
    root_logger.addHandler(console_handler)

    if log_file:
        try:
            file_handler = logging.FileHandler(log_file)
            file_handler.setLevel(level)
            file_handler.setFormatter(formatter)
            setattr(file_handler, _HANDLER_TAG, True)
            root_logger.addHandler(file_handler)
        except OSError as e:
            logger.warning(f"Could not setup file logging: {e}")


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-c', '--config', help='Path to JSON configuration file (optional)')
    common.add_argument('-v', '--verbose', action='store_true', help='Enable verbose logging')
    common.add_argument('--log-file', help='Path to log file (optional)')
    common.add_argument('--quiet', action='store_true', help='Only log errors')
    common.add_argument('--symbolic', action='store_true',
                        help='Also print small rational aliases of field elements')
    common.add_argument('--threads', type=int,
                        help='Worker processes (default: $SUPREG_THREADS, config, CPU count)')
    return common


def _search_parser(sub, name: str, help_text: str, common: argparse.ArgumentParser,
                   handler: Callable, p: bool = True) -> argparse.ArgumentParser:
    parser = sub.add_parser(name, help=help_text, parents=[common])
    parser.add_argument('--gamma', type=int, required=True, help='Matrix order')
    if p:
        parser.add_argument('--p', type=int, required=True, help='Odd prime field size')
    parser.add_argument('--chunk-size', type=int, help='Prefixes per vectorised batch')
    parser.set_defaults(handler=handler)
    return parser


def create_parser() -> argparse.ArgumentParser:
    """Create argument parser for CLI."""
    parser = argparse.ArgumentParser(
        prog='supreg',
        description='Construct, verify and search LT-superregular Toeplitz matrices over F_p',
        epilog='For more information, see the README.md file.'
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    common = _common_parser()
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    verify = sub.add_parser('verify', help='Check a matrix for LT-superregularity', parents=[common])
    verify.add_argument('--p', type=int, required=True, help='Odd prime field size')
    verify.add_argument('--entries', required=True,
                        help='First column a_1,...,a_gamma as integers or rationals (e.g. 1,1,1/2)')
    verify.add_argument('--method', choices=['full', 'incremental'], default='full',
                        help='Check every non-trivial minor, or only corner minors (default: full)')
    verify.set_defaults(handler=cmd_verify)

    forbidden = sub.add_parser('forbidden', help='Forbidden set S_gamma of a prefix', parents=[common])
    forbidden.add_argument('--p', type=int, required=True, help='Odd prime field size')
    forbidden.add_argument('--prefix', required=True, help='a_1,...,a_{gamma-1}')
    forbidden.add_argument('--gamma', type=int, help='Order (default: prefix length + 1)')
    forbidden.add_argument('--provenance', action='store_true',
                           help='List the minors behind each forbidden value')
    forbidden.set_defaults(handler=cmd_forbidden)

    census_cmd = sub.add_parser('census', help='Count the minors involving a_gamma', parents=[common])
    census_cmd.add_argument('--gamma', type=int, required=True, help='Matrix order')
    census_cmd.add_argument('--format', choices=['json', 'csv'], default='json', help='Output format')
    census_cmd.add_argument('--polynomials', action='store_true',
                            help='Include the distinct minor polynomials (JSON only)')
    census_cmd.add_argument('--raw', action='store_true',
                            help='List polynomials before substituting a_1 = a_2 = 1')
    census_cmd.set_defaults(handler=cmd_census)

    search = sub.add_parser('search', help='Search for matrices')
    search_sub = search.add_subparsers(dest='search_command', metavar='search_command')
    search_sub.required = True

    ex = _search_parser(search_sub, 'exhaustive', 'Exhaustive normalised search', common, cmd_search_exhaustive)
    ex.add_argument('--mode', choices=MODES, default='count', help='What to report (default: count)')
    ex.add_argument('--budget', type=int, help='Maximum prefixes expanded')
    ex.add_argument('--checkpoint', help='JSON-lines checkpoint to resume from and append to')
    ex.add_argument('--witness-limit', type=int, help='Maximum matches kept in the record')
    ex.add_argument('--jsonl', action='store_true', help='Stream matches as JSON-lines')

    mf = _search_parser(search_sub, 'min-field', 'Smallest prime admitting a matrix', common,
                        cmd_search_min_field, p=False)
    mf.add_argument('--p-max', type=int, default=100, help='Largest prime tried (default: 100)')

    mfb = _search_parser(search_sub, 'min-forbidden', 'Minimum |S_gamma| over admissible prefixes',
                         common, cmd_search_min_forbidden)
    mfb.add_argument('--budget', type=int, help='Maximum prefixes expanded')
    mfb.add_argument('--checkpoint', help='JSON-lines checkpoint to resume from and append to')
    mfb.add_argument('--witness-limit', type=int, help='Maximum argmin prefixes kept')

    rnd = _search_parser(search_sub, 'random', 'Random heads with exhaustive tails', common,
                         cmd_search_random)
    rnd.add_argument('--trials', type=int, help='Number of random heads')
    rnd.add_argument('--seed', type=int, default=0, help='Seed (default: 0)')
    rnd.add_argument('--tail', type=int, help='Entries searched exhaustively after each head')
    rnd.add_argument('--witness-limit', type=int, help='Maximum matches kept in the record')
    rnd.add_argument('--jsonl', action='store_true', help='Stream matches as JSON-lines')

    gr = _search_parser(search_sub, 'greedy', 'Extend a prefix without backtracking', common,
                        cmd_search_greedy)
    gr.add_argument('--prefix', default='1,1', help='Starting prefix (default: 1,1)')
    gr.add_argument('--policy', choices=['smallest', 'random'], default='smallest',
                    help='How to pick among admissible values (default: smallest)')
    gr.add_argument('--seed', type=int, help='Seed for the random policy')

    cj = _search_parser(search_sub, 'conjecture', 'Compare min |S_gamma| with floor(N_gamma/2) + 2',
                        common, cmd_search_conjecture, p=False)
    cj.add_argument('--primes', help='Comma-separated primes')
    cj.add_argument('--p-min', type=int, help='Smallest prime of a range')
    cj.add_argument('--p-max', type=int, help='Largest prime of a range')
    cj.add_argument('--budget', type=int, help='Maximum prefixes expanded per prime')

    cons = sub.add_parser('construct', help='Closed-form matrix for orders 3 to 6', parents=[common])
    cons.add_argument('--gamma', type=int, required=True, help='Matrix order')
    cons.add_argument('--p', type=int, required=True, help='Odd prime field size')
    cons.add_argument('--variant', help='Construction variant (default: first applicable)')
    cons.set_defaults(handler=cmd_construct)

    wit = sub.add_parser('witness', help='Tabulated matrices for orders 7 to 10', parents=[common])
    wit.add_argument('--gamma', type=int, help='Matrix order')
    wit.add_argument('--p', type=int, help='Prime field size')
    wit.add_argument('--table', help='Only witnesses from this table (e.g. table6)')
    wit.set_defaults(handler=cmd_witness)

    rep = sub.add_parser('reproduce', help='Reproduce a published table', parents=[common])
    rep.add_argument('table', choices=list(TABLES) + ['all'], help='Table to reproduce')
    rep.add_argument('--budget', type=int, help='Maximum prefixes expanded per search')
    rep.add_argument('-o', '--output-dir', help='Output directory (default: ./output)')
    rep.add_argument('--trials', type=int, help='Random trials per table7 prime (default: witnesses only)')
    rep.add_argument('--seed', type=int, help='Seed for table7 random searches')
    rep.add_argument('--format', choices=['json', 'csv'], default='json',
                     help='Print the summary (json) or the table rows (csv)')
    rep.set_defaults(handler=cmd_reproduce)

    return parser


def load_and_merge_config(args: argparse.Namespace) -> Dict:
    """Load configuration and merge with command line arguments."""
    config = ConfigUtils.load_config(getattr(args, 'config', None))

    if getattr(args, 'chunk_size', None) is not None:
        config['search']['chunk_size'] = args.chunk_size
    if getattr(args, 'budget', None) is not None:
        config['search']['node_budget'] = args.budget
    if getattr(args, 'witness_limit', None) is not None:
        config['search']['witness_limit'] = args.witness_limit
    if getattr(args, 'tail', None) is not None:
        config['random']['default_tail'] = args.tail

    if args.command == 'search' and getattr(args, 'trials', None) is not None:
        config['random']['default_trials'] = args.trials
    if args.command == 'reproduce':
        if args.trials is not None:
            config['reproduce']['table7_trials'] = args.trials
        if args.seed is not None:
            config['reproduce']['seed'] = args.seed
        if args.output_dir:
            config['output']['directory'] = args.output_dir

    return config


def validate_arguments(args: argparse.Namespace) -> None:
    """Validate command line arguments."""
    if args.config and not os.path.exists(args.config):
        raise FileNotFoundError(f"Configuration file not found: {args.config}")

    for name in ('threads', 'budget', 'trials', 'chunk_size', 'witness_limit'):
        value = getattr(args, name, None)
        if value is not None and value < 1:
            raise ValueError(f"--{name.replace('_', '-')} must be positive")

    gamma = getattr(args, 'gamma', None)
    if gamma is not None and gamma < 1:
        raise ValueError("--gamma must be at least 1")
    if getattr(args, 'tail', None) is not None and args.tail < 0:
        raise ValueError("--tail must not be negative")
    if getattr(args, 'p', None) is not None:
        PrimeField(args.p)
    if getattr(args, 'p_max', None) is not None and args.p_max < 3:
        raise ValueError("--p-max must be at least 3")


def print_summary(summary: Dict, quiet: bool = False):
    """Print reproduction summary to stderr."""
    if quiet:
        return
    out = sys.stderr
    rep = summary['reproduction_summary']
    print("\n" + "=" * 60, file=out)
    print("REPRODUCTION SUMMARY", file=out)
    print("=" * 60, file=out)
    print(f"Tables: {', '.join(rep['tables'])}", file=out)
    print(f"Rows: {rep['rows_total']} ({rep['rows_passed']} passed, "
          f"{rep['rows_failed']} failed, {rep['rows_skipped']} skipped)", file=out)
    print(f"Processing time: {rep['processing_time_formatted']}", file=out)
    print("\nOutput files:", file=out)
    for file_type, filepath in summary['output_files'].items():
        print(f"  {file_type}: {filepath}", file=out)
    print("=" * 60, file=out)


# Output helpers

def make_record(command: str, parameters: Dict, result: Dict, started: float) -> Dict:
    return {
        'schema_version': SCHEMA_VERSION,
        'command': command,
        'parameters': parameters,
        'result': result,
        'elapsed_seconds': round(time.time() - started, 3),
    }


def emit(record: Dict, jsonl: bool = False):
    text = json.dumps(jsonable(record), separators=(',', ':')) if jsonl else \
        json.dumps(jsonable(record), indent=2)
    sys.stdout.write(text + '\n')
    sys.stdout.flush()


def _stream_match(gamma: int, p: int) -> Callable:
    def write(match):
        emit({'schema_version': SCHEMA_VERSION, 'kind': 'match', 'gamma': gamma, 'p': p,
              'entries': list(match)}, jsonl=True)
    return write


def _matrix_payload(m: ToeplitzLT, args: argparse.Namespace, config: Dict) -> Dict:
    payload = m.to_dict()
    if args.symbolic:
        max_den = config['output']['symbolic_max_denominator']
        payload['aliases'] = [rational_alias(e, max_den) for e in m.entries]
    return payload


def _parse_entries(field: PrimeField, text: str) -> List:
    return [parse_rational(item, field) for item in parse_csv_list(text)]


# Commands

def cmd_verify(args: argparse.Namespace, config: Dict) -> int:
    started = time.time()
    field = PrimeField(args.p)
    m = from_first_column(field, parse_csv_list(args.entries))
    check = is_superregular if args.method == 'full' else is_superregular_incremental
    report = check(m)
    result = dict(report.to_dict(), matrix=_matrix_payload(m, args, config))
    emit(make_record('verify', {'p': args.p, 'entries': args.entries, 'method': args.method},
                     result, started))
    return EXIT_OK if report.verdict else EXIT_NEGATIVE


def cmd_forbidden(args: argparse.Namespace, config: Dict) -> int:
    started = time.time()
    field = PrimeField(args.p)
    prefix = _parse_entries(field, args.prefix)
    gamma = args.gamma if args.gamma is not None else len(prefix) + 1
    fs = forbidden_set(prefix, gamma, field)
    result = fs.to_dict(provenance=args.provenance, symbolic=args.symbolic,
                        max_den=config['output']['symbolic_max_denominator'])
    emit(make_record('forbidden', {'p': args.p, 'prefix': args.prefix, 'gamma': gamma}, result, started))
    if fs.dead:
        logger.error(f"prefix is dead: {fs.dead_minors[0]} vanishes for every a_{gamma}")
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_census(args: argparse.Namespace, config: Dict) -> int:
    started = time.time()
    if args.gamma > config['census']['max_supported_gamma']:
        logger.warning(f"gamma={args.gamma} is beyond the supported census range")
    result = census(args.gamma)
    if args.format == 'csv':
        sys.stdout.write(ReportUtils.to_csv_text([result.to_dict()]))
        return EXIT_OK
    payload = result.to_dict()
    if args.polynomials:
        payload['polynomials'] = format_polys(distinct_polynomials(args.gamma, normalized=not args.raw))
    emit(make_record('census', {'gamma': args.gamma}, payload, started))
    return EXIT_OK


def _finish_search(command: str, parameters: Dict, record, started: float, jsonl: bool,
                   found: bool) -> int:
    payload = record.to_dict()
    if jsonl:
        payload = dict(payload, matches=None)
        emit(dict(make_record(command, parameters, payload, started), kind='summary'), jsonl=True)
    else:
        emit(make_record(command, parameters, payload, started))
    return EXIT_OK if found else EXIT_NEGATIVE


def cmd_search_exhaustive(args: argparse.Namespace, config: Dict) -> int:
    started = time.time()
    workers = ConfigUtils.resolve_threads(args.threads, config)
    task = SearchTask(
        gamma=args.gamma, p=args.p, mode=args.mode, workers=workers,
        chunk_size=config['search']['chunk_size'], node_budget=config['search']['node_budget'],
        witness_limit=config['search']['witness_limit'], checkpoint_path=args.checkpoint,
        checkpoint_every=config['search']['checkpoint_every'],
    )
    on_match = _stream_match(args.gamma, args.p) if args.jsonl and args.mode != 'count' else None
    record = exhaustive(task, on_match=on_match)
    parameters = {'gamma': args.gamma, 'p': args.p, 'mode': args.mode, 'threads': workers,
                  'budget': task.node_budget}
    return _finish_search('search exhaustive', parameters, record, started, args.jsonl, record.count > 0)


def cmd_search_min_field(args: argparse.Namespace, config: Dict) -> int:
    started = time.time()
    workers = ConfigUtils.resolve_threads(args.threads, config)
    result = min_field(args.gamma, args.p_max, workers=workers, chunk_size=config['search']['chunk_size'])
    emit(make_record('search min-field', {'gamma': args.gamma, 'p_max': args.p_max, 'threads': workers},
                     result.to_dict(), started))
    return EXIT_OK if result.found else EXIT_NEGATIVE


def cmd_search_min_forbidden(args: argparse.Namespace, config: Dict) -> int:
    started = time.time()
    workers = ConfigUtils.resolve_threads(args.threads, config)
    record = min_forbidden(
        args.gamma, PrimeField(args.p), budget=config['search']['node_budget'], workers=workers,
        witness_limit=config['search']['witness_limit'], checkpoint_path=args.checkpoint,
        chunk_size=config['search']['chunk_size'],
    )
    parameters = {'gamma': args.gamma, 'p': args.p, 'threads': workers,
                  'budget': config['search']['node_budget']}
    return _finish_search('search min-forbidden', parameters, record, started, False,
                          record.min_size is not None)


def cmd_search_random(args: argparse.Namespace, config: Dict) -> int:
    started = time.time()
    workers = ConfigUtils.resolve_threads(args.threads, config)
    task = SearchTask(
        gamma=args.gamma, p=args.p, mode='first', prefix_policy='random', seed=args.seed,
        trials=config['random']['default_trials'], tail_depth=config['random']['default_tail'],
        workers=workers, chunk_size=config['search']['chunk_size'],
        witness_limit=config['search']['witness_limit'],
    )
    on_match = _stream_match(args.gamma, args.p) if args.jsonl else None
    record = random_prefix(task, on_match=on_match)
    parameters = {'gamma': args.gamma, 'p': args.p, 'trials': task.trials, 'seed': task.seed,
                  'tail': task.tail_depth, 'threads': workers}
    return _finish_search('search random', parameters, record, started, args.jsonl, record.hits > 0)


def cmd_search_greedy(args: argparse.Namespace, config: Dict) -> int:
    started = time.time()
    field = PrimeField(args.p)
    prefix = _parse_entries(field, args.prefix)
    parameters = {'gamma': args.gamma, 'p': args.p, 'prefix': args.prefix, 'policy': args.policy,
                  'seed': args.seed}
    try:
        m = greedy_extend(prefix, args.gamma, policy=args.policy, seed=args.seed, field=field)
    except DeadEnd as e:
        logger.error(str(e))
        emit(make_record('search greedy', parameters, {
            'found': False, 'depth': e.depth, 'prefix': e.prefix, 'forbidden': e.forbidden,
            'provenance': e.detail,
        }, started))
        return EXIT_NEGATIVE
    result = dict(_matrix_payload(m, args, config), found=True,
                  superregular=is_superregular(m).verdict)
    emit(make_record('search greedy', parameters, result, started))
    return EXIT_OK


def _conjecture_primes(args: argparse.Namespace) -> List[int]:
    if args.primes:
        primes = [int(v) for v in parse_csv_list(args.primes)]
        bad = [p for p in primes if not is_prime(p) or p == 2]
        if bad:
            raise ValueError(f"not odd primes: {bad}")
        return primes
    if args.p_max is None:
        raise ValueError("give --primes or --p-max")
    return PrimeUtils.primes_between(args.p_min or 3, args.p_max)


def cmd_search_conjecture(args: argparse.Namespace, config: Dict) -> int:
    started = time.time()
    workers = ConfigUtils.resolve_threads(args.threads, config)
    reports = [
        conjecture_scan(args.gamma, PrimeField(p), budget=config['search']['node_budget'], workers=workers)
        for p in _conjecture_primes(args)
    ]
    violated = [r.p for r in reports if r.satisfied is False]
    result = {'rows': [r.to_dict() for r in reports], 'violations': violated}
    emit(make_record('search conjecture', {'gamma': args.gamma, 'threads': workers}, result, started))
    return EXIT_NEGATIVE if violated else EXIT_OK


def cmd_construct(args: argparse.Namespace, config: Dict) -> int:
    started = time.time()
    field = PrimeField(args.p)
    m = construct(args.gamma, field, args.variant)
    result = dict(_matrix_payload(m, args, config), superregular=True,
                  variants=DEFAULT_ORDER.get(args.gamma, []))
    emit(make_record('construct', {'gamma': args.gamma, 'p': args.p, 'variant': args.variant},
                     result, started))
    return EXIT_OK


def cmd_witness(args: argparse.Namespace, config: Dict) -> int:
    started = time.time()
    parameters = {'gamma': args.gamma, 'p': args.p, 'table': args.table}
    if args.gamma is not None and args.p is not None and args.table is None:
        m = witness(args.gamma, PrimeField(args.p))
        result = dict(_matrix_payload(m, args, config), superregular=is_superregular(m).verdict)
        emit(make_record('witness', parameters, result, started))
        return EXIT_OK

    records = witnesses(args.gamma, args.p, args.table)
    if not records:
        raise NoWitness(f"no witnesses match gamma={args.gamma}, p={args.p}, table={args.table}")
    rows = []
    for w in records:
        row = dict(_matrix_payload(w.matrix(), args, config), source_table=w.source_table)
        if w.different_minors is not None:
            row['different_minors'] = w.different_minors
        if w.relative_frequency is not None:
            row['relative_frequency'] = w.relative_frequency
        rows.append(row)
    emit(make_record('witness', parameters, {'witnesses': rows}, started))
    return EXIT_OK


def cmd_reproduce(args: argparse.Namespace, config: Dict) -> int:
    started = time.time()
    workers = ConfigUtils.resolve_threads(args.threads, config)
    output_dir = config['output']['directory']
    reproducer = TableReproducer(config, workers=workers, budget=config['search']['node_budget'])
    summary = reproducer.reproduce(args.table, output_dir)

    if args.format == 'csv':
        for result in reproducer.results:
            sys.stdout.write(ReportUtils.to_csv_text(result.rows, result.columns))
    else:
        emit(make_record('reproduce', {'table': args.table, 'threads': workers,
                                       'budget': reproducer.budget, 'output_dir': output_dir},
                         summary, started))
    print_summary(summary, quiet=args.quiet)
    return EXIT_NEGATIVE if summary['reproduction_summary']['rows_failed'] else EXIT_OK


def main(argv: Optional[List[str]] = None):
    """Main CLI entry point."""
    parser = create_parser()
    args = parser.parse_args(argv)

    setup_logging(verbose=args.verbose and not args.quiet, log_file=args.log_file, quiet=args.quiet)

    try:
        validate_arguments(args)
        config = load_and_merge_config(args)
        if args.verbose and not args.quiet:
            logger.debug(f"Configuration: {json.dumps(config)}")
        code = args.handler(args, config)

    except KeyboardInterrupt:
        logger.error("Interrupted by user")
        code = EXIT_INTERRUPTED

    except NEGATIVE_ERRORS as e:
        logger.error(str(e))
        code = EXIT_NEGATIVE

    except USAGE_ERRORS as e:
        logger.error(f"Invalid input: {str(e)}")
        code = EXIT_USAGE

    except Exception as e:
        logger.error(f"Internal error: {str(e)}")
        if args.verbose:
            traceback.print_exc()
        else:
            logger.error("Use --verbose for detailed error information.")
        code = EXIT_INTERNAL

    sys.exit(code)


if __name__ == '__main__':
    main()
