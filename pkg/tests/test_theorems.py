"""The structural verifiers and their reports."""

import pytest

from groupoid_ga.constructions import rectangular_band
from groupoid_ga.errors import ValidationError
from groupoid_ga.tables import (
    is_genetic,
    is_idempotent,
    is_nowhere_commutative,
    parse_compact3,
)
from groupoid_ga.theorems import (
    CLAIMED_ORDER3,
    quotient_by_identification,
    subgroupoid_carriers,
    verify_lemma1,
    verify_not_variety,
    verify_theorem1,
    verify_theorem2,
)


def statuses(report):
    return {c.name: c.status for c in report.checks}


def test_theorem1_default_suite_passes():
    report = verify_theorem1()
    assert report.passed
    assert len(report.checks) >= 3
    for check in report.checks:
        assert check.status == "PASS"
        assert check.witness is not None


def test_theorem1_rejects_non_band_factor():
    with pytest.raises(ValidationError):
        verify_theorem1([parse_compact3("000/111")])


def test_theorem1_single_band():
    report = verify_theorem1([rectangular_band(2, 1)])
    assert report.passed
    assert "bounds [1, 0]" in report.checks[0].detail


def test_lemma1_passes():
    report = verify_lemma1()
    assert report.passed
    st = statuses(report)
    assert st["one-cut-from-bare-product-d1"] == "PASS"
    assert st["one-cut-from-bare-product-d2"] == "PASS"
    assoc = [n for n in st if n.startswith("product-associative-up-to-iso")]
    assert len(assoc) >= 5
    noncomm = [n for n in st if n.startswith("noncommutative-pair") and st[n] == "PASS"]
    assert noncomm
    assert st["factor-automorphisms-lift"] == "PASS"


def test_theorem2_reports_the_documented_delta():
    """The claimed 18-class list does not survive the census cross-check.

    Verified facts (triple-checked: canonical classifier, a brute-force
    pairwise search, and a Burnside count): 216 raw tables, 22 classes.
    The claimed list has one entry violating its own side condition
    (011/221), one duplicated class (000/122 vs 011/122), and misses
    several classes. The verifier must surface exactly this delta.
    """
    report = verify_theorem2()
    assert not report.passed
    st = statuses(report)
    assert st["census-raw-count"] == "PASS"
    assert st["census-classes-pairwise-distinct"] == "PASS"
    assert st["unique-associative-class"] == "PASS"
    assert st["claimed-entries-parse-genetic"] == "FAIL"
    assert st["claimed-entries-pairwise-distinct"] == "FAIL"
    assert st["claimed-class-count"] == "FAIL"
    assert st["claimed-list-covers-census"] == "FAIL"
    by_name = {c.name: c for c in report.checks}
    assert "011/221" in by_name["claimed-entries-parse-genetic"].detail
    assert "000/122" in by_name["claimed-entries-pairwise-distinct"].detail
    assert "22" in by_name["claimed-class-count"].detail
    assert "010/221" in by_name["claimed-list-covers-census"].detail  # repair candidate


def test_claimed_list_shape():
    assert len(CLAIMED_ORDER3) == 18
    parseable = 0
    for s in CLAIMED_ORDER3:
        try:
            parse_compact3(s)
            parseable += 1
        except ValidationError:
            pass
    assert parseable == 17


def test_not_variety_passes():
    report = verify_not_variety()
    assert report.passed
    assert all(c.status == "PASS" for c in report.checks)


def test_quotient_of_000_111():
    image, conflict = quotient_by_identification(parse_compact3("000/111"), ((0, 1), (2,)))
    assert conflict is None
    assert image.table == ((0, 0), (0, 1))
    assert is_idempotent(image)
    assert not is_nowhere_commutative(image)
    assert not is_genetic(image)


def test_quotient_can_be_ill_defined():
    # 000/121: 2*0 = 2 stays in {2} but 2*1 = 1 falls into {0,1}
    g = parse_compact3("000/121")
    assert g.table[2][0] == 2 and g.table[2][1] == 1
    image, conflict = quotient_by_identification(g, ((0, 1), (2,)))
    assert image is None
    assert conflict is not None


def test_quotient_partition_validation():
    g = parse_compact3("000/111")
    with pytest.raises(ValidationError):
        quotient_by_identification(g, ((0, 1), (1, 2)))
    with pytest.raises(ValidationError):
        quotient_by_identification(g, ((0,), (2,)))


def test_subgroupoid_carriers():
    g = parse_compact3("001/122")  # left-zero: every subset is closed
    assert len(subgroupoid_carriers(g)) == 7
    h = parse_compact3("000/111")
    carriers = subgroupoid_carriers(h)
    assert (0, 1) in carriers  # {0,1} closed: products stay in {0,1}
    assert all(len(c) != 2 or c == (0, 1) for c in carriers if len(c) == 2)


def test_report_json_shape():
    report = verify_not_variety()
    obj = report.to_json()
    assert obj["theorem"] == "not-variety"
    assert obj["passed"] is True
    assert all("status" in c and "name" in c for c in obj["checks"])
    text = report.summary_text()
    assert "[not-variety] PASS" in text
