import json

from qgevrey.cli import dumps
from qgevrey.verify import CHECKS, run_checks


def test_every_criterion_has_a_check():
    assert sorted(CHECKS[name]().criterion for name in CHECKS) == list(range(1, 13))


def test_report_is_serializable_and_records_conventions():
    results = {r.name: r for r in run_checks()}
    json.loads(dumps([r.to_json() for r in results.values()]))
    assert results["trefoil-H"].details["passing_conventions"] == ["q=e^(-1/x), prefactor e^(-1/(24x))"]
    # the literal habiro-one statement does not hold: the series is -1
    assert not results["habiro-one"].passed
    assert results["habiro-one"].details["taylor_T_head"][0] == "-1"
    assert all(r.passed for name, r in results.items() if name != "habiro-one")
