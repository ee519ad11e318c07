"""Time the compiled interpreter against the pure-Python one.

Runs the same workload (every corpus original over its committed suite,
repeated) through both engines and prints steps/second plus the speedup.

    python3 benchmarks/bench_engines.py [--repeat N] [--corpus DIR]
"""

import argparse
import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), os.pardir, "src"))

from perfloc.corpus import load_problem, problem_dirs    # noqa: E402
from perfloc.runtime import engine_py                    # noqa: E402
from perfloc.runtime.exec import (                       # noqa: E402
    baseline_limits, compile_program, run_suite,
)

try:
    from perfloc.runtime import _engine
except ImportError:
    _engine = None


def workload(corpus):
    for directory in problem_dirs(corpus):
        problem = load_problem(directory)
        ir = compile_program(problem.original)
        limits, base = baseline_limits(ir, problem.suite)
        yield problem.name, ir, problem.suite, limits, base.total_cost


def time_engine(engine, jobs, repeat):
    total_steps = 0
    t0 = time.perf_counter()
    for _ in range(repeat):
        for _name, ir, suite, limits, steps in jobs:
            result = run_suite(ir, suite, limits, engine=engine)
            assert result.total_cost == steps, "engines disagree on cost"
            total_steps += result.total_cost
    return total_steps, time.perf_counter() - t0


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=20,
                        help="workload repetitions per engine (default 20)")
    parser.add_argument("--corpus", default=os.path.join(
        os.path.dirname(__file__), os.pardir, "corpus"))
    args = parser.parse_args(argv)

    jobs = list(workload(args.corpus))
    print(f"workload: {len(jobs)} programs x {args.repeat} repeats, "
          f"{sum(j[4] for j in jobs)} steps per pass")

    engines = [("python", engine_py)]
    if _engine is not None:
        engines.append(("compiled", _engine))
    else:
        print("compiled engine not built; timing the python engine only")

    results = {}
    for label, engine in engines:
        steps, elapsed = time_engine(engine, jobs, args.repeat)
        results[label] = elapsed
        print(f"{label:>9}: {elapsed:8.3f}s  "
              f"{steps / elapsed / 1e6:8.2f} Msteps/s")

    if len(results) == 2:
        print(f"  speedup: {results['python'] / results['compiled']:.1f}x "
              f"(python / compiled)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
