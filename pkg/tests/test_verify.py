import pytest

from spindlehom import reports
from spindlehom.verify import (CHECKS, Entry, UnknownSelector, homotopy_identity,
                               resolve_selectors, run_verify)
from spindlehom.modules import trivial_module
from spindlehom.rings import ZZ
from spindlehom.structures import fixture


def test_default_selectors_cover_every_check():
    assert resolve_selectors(None) == list(CHECKS)
    assert resolve_selectors(["all"]) == list(CHECKS)
    assert resolve_selectors(["kunneth", "axioms"]) == ["kunneth", "axioms"]


def test_unknown_selector():
    with pytest.raises(UnknownSelector):
        resolve_selectors(["axioms", "no-such-check"])


def test_unknown_fixture():
    with pytest.raises(KeyError):
        run_verify(["axioms"], structures=["T9"])


def test_entry_status():
    assert Entry("c", "x", "vacuous").ok
    assert Entry("c", "x", "pass").ok
    assert not Entry("c", "x", "fail").ok


@pytest.mark.parametrize("sel", ["axioms", "splitting", "late-splitting", "homotopy",
                                 "one-term-iso", "recursive-count", "two-term-iso", "kunneth"])
def test_selector_on_small_fixture(sel):
    entries = run_verify([sel], N=3, structures=["T2"])
    assert entries
    assert all(e.check == sel for e in entries)
    assert all(e.ok for e in entries), [e for e in entries if not e.ok]


def test_rack_checks_reach_adjoined_structures():
    # single-op fixtures are checked with the trivial operation adjoined
    cases = {e.case for e in run_verify(["kunneth"], N=2, structures=["R3"])}
    assert any(c.startswith("R3+triv") for c in cases)


def test_homotopy_identity_by_weight():
    X = fixture("R3+triv")
    M = trivial_module(X, 1, ZZ)
    for w in [(1, 0), (0, 1), (-1, 1), (2, -3)]:
        for wit in range(X.size):
            assert homotopy_identity(X, M, w, wit, 3)


def test_summary_counts():
    entries = [Entry("a", "1", "pass"), Entry("a", "2", "vacuous"), Entry("b", "3", "pass")]
    assert reports.summary(entries) == {"pass": 2, "fail": 0, "vacuous": 1}
    assert reports.verify_table(entries).splitlines()[-1] == "2 passed, 0 failed, 1 vacuous"


def test_records_are_reproducible():
    def run():
        entries = run_verify(["axioms", "homotopy"], N=2, structures=["T2"])
        return reports.records(reports.verify_records(entries))

    a, b = run(), run()
    assert a == b
    last = a.splitlines()[-1]
    assert last.startswith('{"kind":"summary","pass":')
