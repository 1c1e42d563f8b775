"""Shared pytest plumbing: the acceptance-criteria summary block.

Each acceptance test is named test_criterion_NN_*; after the run, one
PASS/FAIL line per criterion is printed, with any notes the tests recorded
(measured values, gaps, runtimes) appended.
"""

import re

import pytest

CRITERIA = {
    1: "single-gate second moment: exact 1/5 (1e-12), Haar MC within 0.01, < 30 s",
    2: "n=8 d in {1,2,3}: MC E[q0^2+q1^2] within 4 sigma of exact; exact >= (1+15^-d)/2, < 10 min",
    3: "n=12 d=2 m=3: mean spoof fidelity over 5000 circuits >= bound, within 3 stderr of exact, < 15 min",
    4: "identity gates: fidelity exactly 2^m - 1, selected sampled bits always 0",
    5: "200 random circuits (n<=10, d<=3, 1D/2D): cone marginals, squared-sum and factorization identities to 1e-9",
    6: "Haar moments 1/4 and 1/10 within 4 sigma at 1e5; fourth moments match the exact reference on 10 tuples",
    7: "assignment weight = 15^-d exactly (rational) for d <= 10, 1D and 2D, and <= exact trace moment",
    8: "100 circuits n=8 m in {1,2,3}: exhaustive spoof-sample variance <= 2^(m+n) * collision probability",
    9: "scaled collision: deep limit 2*2^n/(2^n+1) within 3 stderr (n=8 d=30); <= 10 at n=12 critical depth",
    10: "Chebyshev sample count: shortfall frequency over 200 repetitions <= delta + 3 sigma (n=10 d=2)",
    11: "byte-identical result bodies across 1/4/8 workers and reruns, both formats",
}

_NOTES: dict[int, list[str]] = {}


@pytest.fixture
def acceptance_note():
    """Record a short measurement note to show in the summary block."""

    def note(criterion: int, text: str) -> None:
        _NOTES.setdefault(criterion, []).append(text)

    return note


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes: dict[int, str] = {}
    for category, word in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for report in terminalreporter.stats.get(category, []):
            nodeid = getattr(report, "nodeid", "")
            match = re.search(r"test_acceptance\.py::test_criterion_(\d+)", nodeid)
            if match:
                num = int(match.group(1))
                if word == "FAIL" or num not in outcomes:
                    outcomes[num] = word
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(outcomes):
        line = f"criterion {num:2d}: {outcomes[num]}  {CRITERIA[num]}"
        if num in _NOTES:
            line += f"  [{'; '.join(_NOTES[num])}]"
        terminalreporter.write_line(line)
