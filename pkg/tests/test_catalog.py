import numpy as np
import pytest

from orbitcheck import catalog, spaces


def test_catalog_loads_all_sources():
    entries = catalog.load_catalog()
    assert len(entries) == 72
    ids = [e.id for e in entries]
    assert len(set(ids)) == len(ids)
    by_source = {}
    for e in entries:
        by_source.setdefault(e.source, []).append(e)
    assert {s: len(es) for s, es in by_source.items()} == {
        "go-classification": 11,
        "maximal-isotropy-table": 18,
        "intermediate-subgroup-table": 21,
        "symmetric-fibration-table": 15,
        "decomposition-cases": 7,
    }
    assert set(catalog.catalog_sources()) == set(by_source)


def test_constructible_census():
    built = catalog.catalog_list(constructible=True)
    assert len(built) == 20
    assert all(e.constructible for e in built)
    meta_only = catalog.catalog_list(constructible=False)
    assert len(meta_only) == 52
    # every metadata-only entry explains what is missing
    assert all(e.notes for e in meta_only)


def test_catalog_list_filters_compose():
    go_rows = catalog.catalog_list(source="go-classification",
                                   expected_go=True)
    assert len(go_rows) == 11
    negatives = catalog.catalog_list(source="maximal-isotropy-table",
                                     expected_go=False)
    assert len(negatives) == 18
    built_negatives = catalog.catalog_list(source="maximal-isotropy-table",
                                           constructible=True)
    assert sorted(e.id for e in built_negatives) == [
        "t1-V.1-m3n3", "t1-V.10", "t1-V.6-n2"]


def test_get_entry_unknown_id():
    with pytest.raises(catalog.CatalogError):
        catalog.get_entry("go-99")


def test_instantiate_matches_expected_dims(so5_u2):
    entry = catalog.get_entry("go-3-k2")
    assert entry.expected["module_dims"] == [2, 4]
    assert so5_u2.module_dims == (2, 4)
    assert so5_u2.metric_space_dim == entry.expected["metric_space_dim"]


def test_instantiate_rejects_metadata_rows():
    entry = catalog.get_entry("go-9")
    with pytest.raises(catalog.CatalogError) as err:
        catalog.catalog_instantiate(entry)
    assert "e6" in str(err.value)
    with pytest.raises(catalog.CatalogError) as err2:
        catalog.catalog_instantiate(catalog.get_entry("t1-V.2"))
    assert "quaternionic" in str(err2.value)


def test_fibration_rows_cross_reference_constructible_spaces():
    rows = catalog.catalog_list(source="symmetric-fibration-table")
    families = {e.id for e in catalog.catalog_list(source="go-classification")}
    assert len(rows) == 15
    for row in rows:
        assert not row.constructible
        assert {"g", "k", "h"} <= set(row.metadata)
        ref = row.metadata.get("cross_reference")
        if ref is not None:
            # family references resolve to at least one catalog instance
            matches = [i for i in families
                       if i == ref or i.startswith(ref + "-")]
            assert matches, ref


def test_intermediate_table_rows_carry_dimension_data():
    rows = catalog.catalog_list(source="intermediate-subgroup-table")
    assert len(rows) == 21
    dims = [row.metadata["dim_m1"] for row in rows]
    assert dims[:4] == [84, 175, 462, 1463]
    assert all(isinstance(d, int) and d > 0 for d in dims)


def test_maximal_table_keeps_isotropy_labels():
    entry = catalog.get_entry("t1-V.2")
    assert "isotropy_label" in entry.metadata
    assert "\\pi" in entry.metadata["isotropy_label"]


def test_catalog_run_on_structure_cases():
    report = catalog.catalog_run(source="decomposition-cases")
    assert report.passed
    assert len(report.results) == 7
    cases = {}
    for res in report.results:
        entry = catalog.get_entry(res.entry_id)
        cases[entry.expected["structure_case"]] = entry.expected[
            "counting_value"]
        assert res.passed, res.entry_id
    assert cases == {1: 2, 2: 0, 3: 1, 4: 1, 5: 2, 6: 1, 7: 0}


def test_catalog_run_with_explicit_ids():
    report = catalog.catalog_run(ids=["go-6-m2n1", "go-8-n1"], n_samples=10)
    assert report.passed
    assert [r.entry_id for r in report.results] == ["go-6-m2n1", "go-8-n1"]
    for res in report.results:
        names = [c.check for c in res.checks]
        assert "go" in names
        assert all(c.passed for c in res.checks)


def test_catalog_run_reports_unconstructible_ids_as_failures():
    report = catalog.catalog_run(ids=["go-9"])
    assert not report.passed
    res = report.results[0]
    assert res.entry_id == "go-9"
    assert not res.passed
    assert res.error is not None and "e6" in res.error


def test_negative_entry_produces_not_go(so9_tensor):
    report = catalog.catalog_run(ids=["t1-V.1-m3n3"], n_samples=30)
    assert report.passed
    res = report.results[0]
    go_check = next(c for c in res.checks if c.check == "go")
    assert go_check.passed
    assert "NOT_GO" in str(go_check.observed)


def test_report_as_dict_is_json_safe():
    import json
    report = catalog.catalog_run(ids=["go-6-m2n1"], n_samples=5)
    text = json.dumps(report.as_dict(), sort_keys=True)
    data = json.loads(text)
    assert data["passed"] is True
    assert data["results"][0]["id"] == "go-6-m2n1"


def test_entry_as_dict_round_trips_fields():
    entry = catalog.get_entry("go-1")
    data = entry.as_dict()
    assert data["id"] == "go-1"
    assert data["constructible"] is True
    assert data["expected"]["module_dims"] == [7, 7]
    assert data["expected"]["go"] is True
    assert data["expected"]["weakly_symmetric"] is True
    assert data["expected"]["naturally_reductive"] is False
    assert data["expected"]["metric_space_dim"] == 3


def test_weakly_symmetric_and_naturally_reductive_flags():
    flags = {e.id: e.expected for e in catalog.load_catalog()
             if e.source == "go-classification"}
    # the circle-times-exceptional chain is the only non-weakly-symmetric one
    assert flags["go-2"]["weakly_symmetric"] is False
    ws = [i for i, ex in flags.items() if ex["weakly_symmetric"]]
    assert len(ws) == 10
    nr = sorted({i.split("-")[1] for i, ex in flags.items()
                 if ex["naturally_reductive"]})
    assert nr == ["6", "8"]
