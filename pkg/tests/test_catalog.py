"""Catalog contents, filters, overlays and per-entry verification."""

import json
import re
from fractions import Fraction as F
from pathlib import Path

import pytest

from nahmforge.catalog import (
    EXACT_ORDER,
    Catalog,
    CatalogError,
    IdentityRecord,
    catalog_list,
    default_catalog,
    overlay_entry,
    verify,
    verify_record,
)
from nahmforge.expr import Const, QPow, SubstQk, evaluate, from_json, to_json
from nahmforge.series import first_mismatch

# LaTeX source whose \label{...} ids the catalog is cross-checked against
SOURCE = Path(__file__).resolve().parents[1] / "paper.md"

# Labels that carry no checkable identity of their own, with the reason.
EXCLUDED = {
    "sec-pre": "section heading",
    "sec-rank-reduction": "section heading",
    "sec-rank4": "section heading",
    "sec-dual": "section heading",
    "subsec-rank4": "section heading",
    "sec-rank5": "section heading",
    "sec-remark": "section heading",
    "thm-rank-reduction": "theorem wrapper; its displays are catalogued",
    "thm-dual-Zagier": "theorem wrapper; its displays are catalogued",
    "thm-rank4": "theorem wrapper; its displays are catalogued",
    "thm-rank5": "theorem wrapper; its displays are catalogued",
    "lem-H": "lemma wrapper; its displays are catalogued",
    "55": "second label on the H lemma",
    "s2": "theorem wrapper for the alternative representation",
    "conj-dZ5": "conjecture wrapper; dZ5 is catalogued",
    "conj-CMP": "modularity statement, outside exact series checking",
    "eq-dual": "definition of the dual triple",
    "lem-convergence": "analytic convergence statement",
    "lem-convergence-double": "analytic convergence statement",
    "ineq-1": "analytic inequality",
    "ineq-2": "analytic inequality",
    "aq-finite": "general shift rule; its instances finite-* are generated",
    "eq-lemma-sum": "general finite sum; its instances finite-sum-* are generated",
    "X-rec": "quadratic form bookkeeping inside a proof",
    "X-square": "quadratic form bookkeeping inside a proof",
    "ij-id": "quadratic form bookkeeping inside a proof",
    "eq-rank4-square": "completing the square inside a proof",
    "proof-even-constant": "constant term step inside a proof",
    "proof-odd-consant": "constant term step inside a proof",
    "proof-even-mid": "constant term step inside a proof",
    "new-mid": "constant term step inside a proof",
    "Z-CT": "constant term step inside a proof",
    "prop-rank4-start": "general rank four form; instances catalogued as chi4-1 .. chi4-5",
    "chi5-start": "general rank five form; instances catalogued as eq-rank5-*",
    "chi5-abc-H": "general rank five form; instances catalogued as eq-rank5-*",
    "Gk-defn": "definition of a series family",
    "wGk-defn": "definition of a series family",
    "Gki-mid": "definition of a parity split",
    "wGki-mid": "definition of a parity split",
    "Zk-defn": "definition of a series family",
    "Zk0": "definition of a parity split",
    "Zk1": "definition of a parity split",
    "Z123": "rewriting inside a proof; checked through Z123-split",
    "Z456": "rewriting inside a proof; checked through Z456-split",
    "alpha1234": "parameter vectors",
    "alpha5": "parameter vector",
    "5-gamma": "parameter vectors",
    "Hki": "definition of a series family",
    "wHki": "definition of a series family",
    "rank5-Ust": "relation between definitions",
}


@pytest.fixture(scope="module")
def cat():
    return Catalog()


def test_catalog_is_large(cat):
    ids = [r.id for r in cat.records() if not r.metadata_only]
    assert len(ids) >= 60
    assert len(set(ids)) == len(ids)


def test_records_sorted_and_stable(cat):
    a = [r.id for r in cat.records()]
    b = [r.id for r in Catalog().records()]
    assert a == sorted(a) == b


@pytest.mark.skipif(not SOURCE.exists(), reason="label source not present")
def test_label_coverage_cross_check(cat):
    labels = set(re.findall(r"\\label\{([^}]*)\}", SOURCE.read_text(encoding="utf-8")))
    covered = cat.paper_labels()
    assert not (set(EXCLUDED) & covered), "a label is both excluded and catalogued"
    assert labels - covered == set(EXCLUDED)
    assert covered <= labels


def test_conjecture_filter(cat):
    ids = {r.id for r in cat.list({"status": "conjecture"})}
    assert ids == {"dZ5", "table-2(-1,-1,-2)"}


def test_conjecture_row_has_note(cat):
    assert cat.get("table-2(-1,-1,-2)").note


def test_ag_family_listing(cat):
    params = {r.params for r in cat.list({"family": "AG"})}
    assert params == {(k, s) for k in range(2, 6) for s in range(1, k + 1)}


def test_generated_ids(cat):
    assert cat.get("AG(7,3)").params == (7, 3)
    assert cat.get("finite-sum-3(150)").params == (150,)
    assert "finite-4(40)" in cat
    assert "AG(9,1)" not in cat
    with pytest.raises(CatalogError):
        cat.get("AG(9,1)")
    with pytest.raises(CatalogError):
        cat.get("no-such-identity")


def test_filters(cat):
    assert {r.family for r in cat.list({"family": "slater"})} == {"slater"}
    assert all(r.id.startswith("dZ") for r in cat.list({"id": "dZ"}))
    assert len(cat.list({"paper_label": "tab-rank5"})) == 9
    with pytest.raises(CatalogError):
        cat.list({"colour": "red"})


def test_metadata_rows(cat):
    rows = cat.list({"family": "table-1"})
    assert len(rows) == 5
    assert all(r.metadata_only for r in rows)
    meta = dict(cat.get("table-2(0,0,0)").metadata)
    assert meta["C"] == "-55/84"
    with pytest.raises(CatalogError):
        verify_record(rows[0])
    summary = catalog_list({"family": "table-2"})
    assert summary[0]["metadata_only"] is True


def test_corrupted_identity_reports_first_mismatch(cat):
    rec = cat.get("RR-a0")
    bad = IdentityRecord("RR-a0-bad", "RR", "known-classical", 50, rec.lhs,
                         rec.rhs * (Const(1) + QPow(7)))
    rep = verify_record(bad)
    assert rep.outcome == "mismatch"
    e, lhs_c, rhs_c = rep.mismatch_detail
    assert e == 7 and rhs_c - lhs_c == 1


def test_dz5_conjecture_label():
    rep = verify("dZ5", 200)
    assert rep.ok
    assert rep.label == "conjecture-verified-to-order 200"
    doc = rep.to_json()
    assert doc["status"] == "conjecture" and doc["outcome"] == "match"


def test_overlay_add_and_shadow(tmp_path, cat):
    entry = overlay_entry(cat.get("RR-a1"))
    entry["id"] = "my-RR"
    path = tmp_path / "overlay.json"
    path.write_text(json.dumps({"identities": [entry]}))
    c = Catalog(str(path))
    assert "my-RR" in c and c.overlay_ids == ["my-RR"]
    assert verify("my-RR", 60, c).ok

    for clash in ("RR-a1", "AG(3,1)"):
        entry["id"] = clash
        path.write_text(json.dumps({"identities": [entry]}))
        with pytest.raises(CatalogError):
            Catalog(str(path))

    path.write_text("{\"identities\": 3}")
    with pytest.raises(CatalogError):
        Catalog(str(path))
    with pytest.raises(CatalogError):
        Catalog(str(tmp_path / "missing.json"))


def test_overlay_env_var(tmp_path, monkeypatch, cat):
    entry = overlay_entry(cat.get("euler-2[z=q^1]"))
    entry["id"] = "env-euler"
    path = tmp_path / "env.json"
    path.write_text(json.dumps({"identities": [entry]}))
    monkeypatch.setenv("NAHMFORGE_CATALOG", str(path))
    assert "env-euler" in default_catalog()


def test_json_roundtrip_of_every_side(cat):
    for rec in cat.records():
        if rec.metadata_only:
            continue
        assert from_json(json.loads(json.dumps(to_json(rec.lhs)))) == rec.lhs
        assert from_json(json.loads(json.dumps(to_json(rec.rhs)))) == rec.rhs


def _quick_order(rec):
    if rec.default_order == EXACT_ORDER:
        return EXACT_ORDER
    return min(rec.default_order, F(30))


@pytest.mark.parametrize("ident", [r.id for r in Catalog().records() if not r.metadata_only])
def test_every_entry_verifies(ident, cat):
    rec = cat.get(ident)
    rep = verify_record(rec, _quick_order(rec))
    assert rep.outcome == "match", rep


def test_reference_examples(cat):
    assert verify("RR-a0", 100).ok
    psi = evaluate(cat.get("psi-product").rhs, 30)
    assert {e for e, c in psi.items() if c} == {F(n * (n + 1), 2) for n in range(8)}
    dz1 = cat.get("dZ1")
    assert first_mismatch(evaluate(dz1.lhs, 80), evaluate(dz1.rhs, 80), 80) is None


@pytest.mark.parametrize("ident", ["RR-a1", "dZ2", "S.117", "eq-G3", "H30-product", "reduce-odd(0,0,1/2)"])
def test_substitution_stable(ident, cat):
    rec = cat.get(ident)
    doubled = IdentityRecord(ident + "@q2", rec.paper_label, rec.status, 40,
                             SubstQk(rec.lhs, 2), SubstQk(rec.rhs, 2))
    assert verify_record(doubled).ok


def test_eval_accuracy_sound(cat):
    for ident in ("Rogers-a1", "eq-4-5", "rank1-triple(1/2,0)", "Heine[a=q,b=-q^1/2,c=q^2,t=q]"):
        side = cat.get(ident).rhs
        lo, hi = evaluate(side, 15), evaluate(side, 35)
        assert first_mismatch(lo, hi, 15) is None
