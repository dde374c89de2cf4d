"""Differential oracles, the classification report, and analysis documents.

Every structural identity the engine relies on is re-checked against an
independent brute-force computation.  In strict mode the theorem-tier
identities are hard assertions; in exploratory mode genuine failures are
recorded as report-severity findings rather than errors.
Run: python3 demos/05_oracles_and_reports.py
"""

import json

from orbitpieces.classify import classification_report
from orbitpieces.gspace import make_random, named_instance
from orbitpieces.harness import build_analysis, run_oracles
from orbitpieces.scott import analyze

inst = named_instance("z4self")

# Definitional suites pass on every valid instance, any mode.
for suite in ("locsat", "bH", "vaught", "phar"):
    log = run_oracles(inst, suite)
    print(f"suite {suite:8s} -> {len(log)} entries")

# The surrounding-piece lemma needs arbitrarily small windows, which the
# exploratory z4self family does not have, so the list suite reports
# findings (severity "report", exit code stays 0).
log = run_oracles(inst, "list", trials=32)
print(f"suite list     -> {len(log)} entries, severities "
      f"{sorted({e['severity'] for e in log})}")
print("sample finding:", json.dumps(log[0]["witness"], sort_keys=True))
print()

# On strict instances the whole theorem tier must stay silent.
strict = make_random(1, strict=True)
entries = run_oracles(strict, "all", seed=1)
print(f"{strict.name}: full oracle run -> {len(entries)} entries")

# The classification report ties the four characterization conditions
# together; exploratory instances may separate them.
coarse = named_instance("z4coarse")
rep = classification_report(coarse, analyze(coarse))
print()
print("z4coarse conditions:", json.dumps(rep["conditions"], sort_keys=True))
print("divergences:", rep["divergences"])

# Everything above is bundled into one reproducible JSON document.
doc = build_analysis(named_instance("z4pairs"), trials=4)
print()
print("analysis document keys:", sorted(doc))
print("stabilization:", doc["stabilization"], "ranks:", doc["ranks"])
