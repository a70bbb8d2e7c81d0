import os

from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


CRITERIA = {
    1: "exhaustive oracle equivalence of the arithmetic blocks",
    2: "QFT matches the DFT matrix for d^q <= 125",
    3: "decompositions equal their defining matrices up to global phase",
    4: "gate counts: R_k cost, MMAC R-bar formula, library size",
    5: "depth: MMAC layers, ADD linear depth, ADDC core depth",
    6: "leading exponents of elementary cost and register widths",
    7: "diagonal operator phases and Reg2 purity",
    8: "H/T approximation of z-rotations",
    9: "file round trip and circuit inversion",
}


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE

    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, text in CRITERIA.items():
        cases = ACCEPTANCE.get(n)
        if not cases:
            terminalreporter.write_line(f"criterion {n}: NOT RUN  {text}")
            continue
        failed = [c for c in cases if not c[1]]
        status = "PASS" if not failed else "FAIL"
        line = f"criterion {n}: {status}  {text} ({len(cases) - len(failed)}/{len(cases)} cases)"
        for case, _, detail in failed:
            line += f"\n    failed: {case} {detail}"
        terminalreporter.write_line(line)
