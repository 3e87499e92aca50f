"""Loading and validating the four input tables."""

import datetime as dt

import pytest
from hypothesis import given
from hypothesis import strategies as st

from proxyval.errors import (
    BadDate,
    DuplicateAnimalId,
    DuplicateProductId,
    EmptyInput,
    MalformedRow,
    MissingColumn,
    NegativeCount,
    NonContiguousMonths,
    NonPositiveQuantity,
    UnknownCategory,
    UnknownFoodForm,
    UnknownGroup,
)
from proxyval.ingest import (
    Category,
    FoodForm,
    Group,
    catalog_summary,
    load_catalog,
    load_claim_series,
    load_purchases,
    load_questionnaire,
    normalize_token,
    purchase_summary,
    split_tokens,
    write_catalog,
    write_claim_series,
    write_purchases,
    write_questionnaire,
)
from proxyval.months import Month


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_normalize_token():
    assert normalize_token("  Chicken　 MEAL ") == "chicken meal"
    assert normalize_token("ＦＬＵＴＤ") == "flutd"
    assert split_tokens("Rice; chicken ;;rice") == frozenset({"rice", "chicken"})


def test_purchases_sorted_by_user_then_date(tmp_path):
    p = write(tmp_path, "p.csv", "user_id,date,product_id,quantity\n"
              "u2,2020-01-05,a,1\nu1,2020-02-01,b,2\nu1,2020-01-01,c,1\nu1,2020-01-01,d,1\n")
    t = load_purchases(p)
    assert [(r.user_id, r.product_id) for r in t] == [("u1", "c"), ("u1", "d"), ("u1", "b"), ("u2", "a")]
    assert t[0].date == dt.date(2020, 1, 1) and t[2].quantity == 2
    s = purchase_summary(t)
    assert s["n_users"] == 2 and s["first_date"] == "2020-01-01"


@pytest.mark.parametrize("row,err", [
    ("u1,2020-02-30,a,1", BadDate),
    ("u1,2020-01-01,a,0", NonPositiveQuantity),
    ("u1,2020-01-01,a,x", MalformedRow),
    ("u1,2020-01-01,a", MalformedRow),
    (",2020-01-01,a,1", MalformedRow),
])
def test_purchase_row_errors(tmp_path, row, err):
    p = write(tmp_path, "p.csv", f"user_id,date,product_id,quantity\nu0,2020-01-01,a,1\n{row}\n")
    with pytest.raises(err) as exc:
        load_purchases(p)
    assert exc.value.line == 3
    lenient = load_purchases(p, strict=False)
    assert len(lenient) == 1 and len(lenient.skipped) == 1 and lenient.n_rows == 2


def test_missing_column_and_empty_file(tmp_path):
    with pytest.raises(MissingColumn):
        load_purchases(write(tmp_path, "p.csv", "user_id,date,quantity\n"))
    with pytest.raises(EmptyInput):
        load_purchases(write(tmp_path, "e.csv", ""))


def test_catalog(tmp_path):
    p = write(tmp_path, "c.csv", "product_id,name,category,food_form,ingredients\n"
              "p2,Urinary Care,Therapeutic,DRY,chicken;rice\np1,Tuna Pouch,general,wet,Tuna\n")
    cat = load_catalog(p)
    assert list(cat) == ["p1", "p2"]
    assert cat["p2"].category is Category.THERAPEUTIC and cat["p2"].food_form is FoodForm.DRY
    assert cat["p1"].ingredients == frozenset({"tuna"})
    assert catalog_summary(cat)["n_ingredients"] == 3


@pytest.mark.parametrize("row,err", [
    ("p1,x,general,dry,a", DuplicateProductId),
    ("p3,x,premium,dry,a", UnknownCategory),
    ("p3,x,general,semi,a", UnknownFoodForm),
])
def test_catalog_errors(tmp_path, row, err):
    p = write(tmp_path, "c.csv", f"product_id,name,category,food_form,ingredients\np1,x,general,dry,a\n{row}\n")
    with pytest.raises(err):
        load_catalog(p)
    assert list(load_catalog(p, strict=False)) == ["p1"]


def test_claim_series(tmp_path):
    p = write(tmp_path, "m.csv", "month,count\n2019-11,3\n2019-12,0\n2020-01,7\n")
    rows = load_claim_series(p)
    assert [r.month for r in rows] == [Month(2019, 11), Month(2019, 12), Month(2020, 1)]
    with pytest.raises(NonContiguousMonths):
        load_claim_series(write(tmp_path, "g.csv", "month,count\n2019-11,3\n2020-01,7\n"))
    with pytest.raises(NegativeCount):
        load_claim_series(write(tmp_path, "n.csv", "month,count\n2019-11,-1\n"))
    with pytest.raises(BadDate):
        load_claim_series(write(tmp_path, "b.csv", "month,count\n2019-13,1\n"))


def test_questionnaire(tmp_path):
    p = write(tmp_path, "q.csv", "animal_id,group,exposures\nb,Control,fish\na,case,chicken;rice\n")
    q = load_questionnaire(p)
    assert [r.animal_id for r in q] == ["a", "b"]
    assert q[0].group is Group.CASE and q[0].exposures == frozenset({"chicken", "rice"})
    with pytest.raises(DuplicateAnimalId):
        load_questionnaire(write(tmp_path, "d.csv", "animal_id,group,exposures\na,case,x\na,case,y\n"))
    with pytest.raises(UnknownGroup):
        load_questionnaire(write(tmp_path, "u.csv", "animal_id,group,exposures\na,maybe,x\n"))


def test_round_trips(tmp_path):
    purchases = load_purchases(write(tmp_path, "p.csv", "user_id,date,product_id,quantity\nu1,2020-01-01,a,1\n"))
    catalog = load_catalog(write(tmp_path, "c.csv", "product_id,name,category,food_form,ingredients\n"
                                 "a,A,general,wet,x;y\n"))
    claims = load_claim_series(write(tmp_path, "m.csv", "month,count\n2020-01,4\n"))
    quest = load_questionnaire(write(tmp_path, "q.csv", "animal_id,group,exposures\nz,case,x\n"))
    write_purchases(tmp_path / "p2.csv", purchases)
    write_catalog(tmp_path / "c2.csv", catalog)
    write_claim_series(tmp_path / "m2.csv", claims)
    write_questionnaire(tmp_path / "q2.csv", quest)
    assert tuple(load_purchases(tmp_path / "p2.csv")) == tuple(purchases)
    assert dict(load_catalog(tmp_path / "c2.csv")) == dict(catalog)
    assert tuple(load_claim_series(tmp_path / "m2.csv")) == tuple(claims)
    assert tuple(load_questionnaire(tmp_path / "q2.csv")) == tuple(quest)


def test_error_record_is_machine_readable(tmp_path):
    p = write(tmp_path, "p.csv", "user_id,date,product_id,quantity\nu1,bad,a,1\n")
    with pytest.raises(BadDate) as exc:
        load_purchases(p)
    rec = exc.value.to_record()
    assert rec["error"] == "BadDate" and rec["line"] == 2


@given(st.integers(1900 * 12, 2100 * 12), st.integers(-500, 500))
def test_month_arithmetic(ordinal, k):
    m = Month.from_ordinal(ordinal)
    assert (m + k) - m == k
    assert Month.parse(str(m)) == m
    assert m.first_day() + dt.timedelta(days=m.n_days()) == (m + 1).first_day()
