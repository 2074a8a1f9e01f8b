# Run the full cross-check battery: priors, capacities, rate-distortion,
# branch orthonormality, the Holevo chain, and simulator-vs-bounds.
#
# Same engine as `phasebound verify`; the margin printed per check is the
# tightest slack found, tolerance included, so anything negative is a
# real violation.

from phasebound import run_verification

report = run_verification()
for line in report.lines():
    print(line)

raise SystemExit(0 if report.passed else 1)
