"""Run the named verification suites and render their reports.

Each suite replays one structural identity of the theory on seeded random
instances; identical (suite, seed, trials, tol) arguments reproduce identical
records.  The full catalogue is also reachable from the command line via
`decmap verify --suite NAME` and `decmap report`.
"""

from decmap import SUITE_CATALOGUE, run_suite
from decmap.suite import report_markdown

print("catalogue:")
for name, (_, statement) in sorted(SUITE_CATALOGUE.items()):
    print(f"  {name:18s} {statement}")

# a structural suite: dimensions of the two involution eigenspaces on the
# sixteen-dimensional space of maps on the quaternions
print()
print(report_markdown(run_suite("quaternion_dims", seed=1, trials=1)))

# a numerical suite: CP maps collapse all three norms
print(report_markdown(run_suite("cp_norms", seed=42, trials=5)))

# reproducibility is bit-for-bit
r1 = run_suite("jordan", seed=7, trials=2)
r2 = run_suite("jordan", seed=7, trials=2)
print("jordan suite reproduces identical records:", r1.records == r2.records)
