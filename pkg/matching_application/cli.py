"""
Command-line front end

    gen     write an update sequence file
    run     replay a sequence, optionally verifying every V updates
    verify  replay with verification after every update plus the oracle check
    bench   amortized time per update across vertex counts

Exit codes: 0 clean, 1 invariant or ratio violation, 2 usage or I/O error.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

from matching_application.app import setup_logging
from matching_application.config import config
from matching_application.dynamic_matching.core.errors import MatchingError
from matching_application.dynamic_matching.core.processor import ReplayProcessor, ReplayResult
from matching_application.dynamic_matching.utils.bench import format_table, run_bench
from matching_application.dynamic_matching.utils.metrics import export, summary_table
from matching_application.dynamic_matching.utils.workload import (
    PATTERNS,
    extend_with_teardown,
    gen_named,
    gen_random,
    load,
    save,
    serialize,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


def _add_replay_options(parser: argparse.ArgumentParser):
    parser.add_argument('--input', required=True, help='sequence file')
    parser.add_argument('--seed', type=int, help='engine PRNG seed (default from the profile)')
    parser.add_argument('--threshold', type=int,
                        help='degree/ownership threshold (default ceil(sqrt(n)))')
    parser.add_argument('--teardown', action='store_true',
                        help='append deletes of every remaining edge')
    parser.add_argument('--metrics', help='write metrics to this file')
    parser.add_argument('--format', choices=('json', 'csv'), default='json', help='metrics format')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='matching',
        description='Fully dynamic 3/2-approximate maximum matching',
    )
    parser.add_argument('-v', '--verbose', action='store_true', help='debug logging')
    parser.add_argument('--profile', choices=sorted(config),
                        default=os.environ.get('FLASK_ENV', 'default'),
                        help='configuration profile supplying engine defaults')
    sub = parser.add_subparsers(dest='command', required=True)

    gen = sub.add_parser('gen', help='generate an update sequence')
    gen.add_argument('--pattern', choices=('random',) + PATTERNS, default='random')
    gen.add_argument('--n', type=int, required=True, help='vertex count')
    gen.add_argument('--t', type=int, help='update count for random sequences (default 10n)')
    gen.add_argument('--p-insert', type=float, default=0.6, help='insert probability')
    gen.add_argument('--rounds', type=int, help='churn rounds for named patterns (default 2n)')
    gen.add_argument('--seed', type=int, default=0, help='generator seed')
    gen.add_argument('--teardown', action='store_true', help='append deletes of every remaining edge')
    gen.add_argument('--out', default='-', help="output file, '-' for stdout")

    run = sub.add_parser('run', help='replay a sequence')
    _add_replay_options(run)
    run.add_argument('--verify-every', type=int,
                     help='check invariants every V updates (0 = only at the end, '
                          'default from the profile)')

    verify = sub.add_parser('verify', help='replay with full verification and oracle check')
    _add_replay_options(verify)

    bench = sub.add_parser('bench', help='amortized update time across n')
    bench.add_argument('--n-list', type=int, nargs='+', required=True, help='vertex counts')
    bench.add_argument('--updates-per-n', type=int, help='updates per cell (default 10n)')
    bench.add_argument('--p-insert', type=float, default=0.6, help='insert probability')
    bench.add_argument('--seed', type=int, default=0, help='generator and engine seed')

    return parser


def _cmd_gen(args) -> int:
    if args.pattern == 'random':
        t = args.t if args.t is not None else 10 * args.n
        seq = gen_random(args.n, t, args.p_insert, args.seed)
    else:
        seq = gen_named(args.pattern, args.n, args.seed, args.rounds)
    if args.teardown:
        seq = extend_with_teardown(seq)
    if args.out == '-':
        sys.stdout.write(serialize(seq))
    else:
        save(seq, args.out)
    return EXIT_OK


def _pick(value, fallback):
    return fallback if value is None else value


def _replay(args, verify_every: Optional[int], check_oracle: bool) -> int:
    settings = config.get(args.profile, config['default'])
    seq = load(args.input)
    if args.teardown:
        seq = extend_with_teardown(seq)
    processor = ReplayProcessor(
        seed=_pick(args.seed, settings.MATCHING_SEED),
        threshold=_pick(args.threshold, settings.MATCHING_THRESHOLD),
        verify_every=_pick(verify_every, settings.VERIFY_EVERY),
        check_oracle=check_oracle,
        oracle_max_vertices=settings.ORACLE_MAX_VERTICES,
        oracle_max_edges=settings.ORACLE_MAX_EDGES,
    )
    result = processor.run(seq)
    _report(args, result)
    return EXIT_OK if result.success else EXIT_VIOLATION


def _report(args, result: ReplayResult):
    if args.metrics:
        Path(args.metrics).write_text(export(result.stats, args.format), encoding='utf-8')
        logger.info(f"📝 Metrics written to {args.metrics}")
    print(summary_table(result.stats))
    if result.ratio is not None:
        print(f"ratio_check  {result.ratio.status}")
    if not result.success:
        logger.error(f"❌ Violation at update {result.failed_at}")
        if result.report:
            sys.stderr.write(result.report.to_text() + '\n')


def _cmd_bench(args) -> int:
    cells = run_bench(args.n_list, args.updates_per_n, args.seed, args.p_insert)
    print(format_table(cells))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    setup_logging(None, logging.DEBUG if args.verbose else logging.INFO)

    try:
        if args.command == 'gen':
            return _cmd_gen(args)
        if args.command == 'run':
            return _replay(args, args.verify_every, check_oracle=False)
        if args.command == 'verify':
            return _replay(args, verify_every=1, check_oracle=True)
        return _cmd_bench(args)
    except MatchingError as e:
        logger.error(f"❌ {e}")
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"❌ I/O error: {e}")
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
