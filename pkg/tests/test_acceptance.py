"""Acceptance gate: every criterion must pass; one status line each."""

import pytest

from factorlens import suite

# read by the terminal summary hook in conftest.py
VERDICT_LINES: list[str] = []


@pytest.mark.parametrize("number", sorted(suite.CRITERIA))
def test_criterion(number):
    verdict = suite.CRITERIA[number]()
    VERDICT_LINES.append(verdict.line())
    print(verdict.line())
    for d in verdict.details:
        print("    " + str(d))
    assert verdict.passed, "\n".join(map(str, verdict.details))


def test_perturbed_atoms_fail_criterion_one():
    verdict = suite.criterion_1(perturb=True)
    print(verdict.line())
    assert not verdict.passed
    assert not verdict.partial


if __name__ == "__main__":
    import sys

    results = suite.run_suite()
    for v in results:
        print(v.line())
    sys.exit(0 if all(v.passed for v in results) else 1)
