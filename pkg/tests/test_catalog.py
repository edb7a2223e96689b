import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from skillscout.catalog import (
    Catalog,
    CatalogError,
    Category,
    Skill,
    catalog_to_dict,
    child_categories,
    generate_synthetic_catalog,
    load_catalog,
    skill_metadata,
    top_skills,
    write_catalog,
)
from skillscout.intents import MetadataType


def test_paper_scale_counts(paper_catalog, tmp_path):
    write_catalog(paper_catalog, tmp_path / "cat.json")
    loaded = load_catalog(tmp_path / "cat.json")
    assert loaded.skill_count == 1903
    assert loaded.category_count == 191
    assert len(loaded.root_category_ids) == 48


def test_empty_catalog_is_valid():
    catalog = Catalog(skills={}, categories={}, root_category_ids=())
    assert catalog.skill_count == 0
    assert top_skills(catalog, None, 3) == []


def test_self_parent_is_a_cycle_error():
    with pytest.raises(CatalogError, match="parent|cycle|unreachable"):
        Catalog(
            skills={},
            categories={"a": Category(id="a", name="a", parent_id="a",
                                      child_category_ids=("a",))},
            root_category_ids=(),
        )


def test_dangling_skill_category_reference():
    skill = Skill(id="s", name="S", category_ids=frozenset({"nope"}),
                  popularity=1, rating=4.0, review_count=1)
    with pytest.raises(CatalogError, match="unknown category"):
        Catalog(skills={"s": skill}, categories={}, root_category_ids=())


def test_rating_out_of_range_rejected():
    skill = Skill(id="s", name="S", category_ids=frozenset({"c"}),
                  popularity=1, rating=7.0, review_count=1)
    cat = Category(id="c", name="c", skill_ids=("s",))
    with pytest.raises(CatalogError, match="rating"):
        Catalog(skills={"s": skill}, categories={"c": cat}, root_category_ids=("c",))


def test_load_rejects_malformed_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(CatalogError, match="not valid JSON"):
        load_catalog(path)


def test_load_rejects_wrong_version(tmp_path):
    path = tmp_path / "v9.json"
    path.write_text(json.dumps({"format_version": 9, "skills": [], "categories": []}))
    with pytest.raises(CatalogError, match="format_version"):
        load_catalog(path)


def test_top_skills_picks_most_popular(toy_catalog):
    top = top_skills(toy_catalog, "history", n=1)
    assert [s.id for s in top] == ["ultimate-history-quiz"]


def test_top_skills_exhausted_category_is_empty(toy_catalog):
    exclude = {"ultimate-history-quiz", "history-heroes"}
    assert top_skills(toy_catalog, "history", n=1, exclude=exclude) == []


def test_top_skills_tie_breaks_ascending_id():
    skills = {
        "b1": Skill(id="b1", name="B", category_ids=frozenset({"c"}),
                    popularity=4, rating=4.0, review_count=1),
        "a2": Skill(id="a2", name="A", category_ids=frozenset({"c"}),
                    popularity=4, rating=4.0, review_count=1),
        "z9": Skill(id="z9", name="Z", category_ids=frozenset({"c"}),
                    popularity=9, rating=4.0, review_count=1),
    }
    cat = Category(id="c", name="c", skill_ids=tuple(skills))
    catalog = Catalog(skills=skills, categories={"c": cat}, root_category_ids=("c",))
    assert [s.id for s in top_skills(catalog, "c", n=1)] == ["z9"]
    assert [s.id for s in top_skills(catalog, "c", n=2)] == ["z9", "a2"]


def test_top_skills_unknown_category(toy_catalog):
    with pytest.raises(KeyError, match="unknown category"):
        top_skills(toy_catalog, "nope", n=1)


def test_child_categories_roots_when_absent(paper_catalog):
    cats = child_categories(paper_catalog, None, k=5)
    assert len(cats) == 5
    assert all(c.parent_id is None for c in cats)


def test_child_categories_fewer_than_k(toy_catalog):
    assert len(child_categories(toy_catalog, None, k=5)) == 3
    assert child_categories(toy_catalog, "history", k=3) == []


def test_child_categories_all_excluded(toy_catalog):
    exclude = set(toy_catalog.root_category_ids)
    assert child_categories(toy_catalog, None, k=1, exclude=exclude) == []


def test_child_categories_k_validation(toy_catalog):
    with pytest.raises(ValueError, match="k must be"):
        child_categories(toy_catalog, None, k=2)


def test_roundtrip_equality(desk_catalog, tmp_path):
    write_catalog(desk_catalog, tmp_path / "cat.json")
    loaded = load_catalog(tmp_path / "cat.json")
    assert catalog_to_dict(loaded) == catalog_to_dict(desk_catalog)


def test_synthetic_determinism():
    a = generate_synthetic_catalog(7, 10, 2, 5)
    b = generate_synthetic_catalog(7, 10, 2, 5)
    assert catalog_to_dict(a) == catalog_to_dict(b)


def test_synthetic_infeasible_shape():
    with pytest.raises(ValueError, match="infeasible"):
        generate_synthetic_catalog(1, 5, 6, 6)


def test_synthetic_structure(desk_catalog):
    # every category reachable from a root, every skill in >=1 category
    reachable = set()
    stack = list(desk_catalog.root_category_ids)
    while stack:
        cid = stack.pop()
        reachable.add(cid)
        stack.extend(desk_catalog.categories[cid].child_category_ids)
    assert reachable == set(desk_catalog.categories)
    assert all(s.category_ids for s in desk_catalog.skills.values())


def test_skill_metadata_bindings(toy_catalog):
    vortex = toy_catalog.skills["the-vortex"]
    assert skill_metadata(vortex, MetadataType.RATING_REVIEW) == {"rating": 4.0, "reviews": 912}
    assert skill_metadata(vortex, MetadataType.NO_METADATA) == {}
    assert skill_metadata(vortex, MetadataType.TRENDING) == {"trending": True}
    assert skill_metadata(vortex, MetadataType.SHORT_DESCRIPTION) == {
        "description": "Trivia with a twist."
    }


@settings(max_examples=40, deadline=None)
@given(
    seed=st.integers(0, 1_000),
    n=st.integers(1, 8),
    exclude_bits=st.integers(0, 255),
)
def test_top_skills_properties(seed, n, exclude_bits):
    catalog = generate_synthetic_catalog(seed % 5, 40, 3, 8)
    ids = sorted(catalog.skills)
    exclude = {sid for i, sid in enumerate(ids[:8]) if exclude_bits >> i & 1}
    result = top_skills(catalog, None, n=n, exclude=exclude)
    got = [s.id for s in result]
    assert len(got) == len(set(got))
    assert not (set(got) & exclude)
    pops = [s.popularity for s in result]
    assert pops == sorted(pops, reverse=True)
    for earlier, later in zip(result, result[1:]):
        if earlier.popularity == later.popularity:
            assert earlier.id < later.id


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 4), k=st.sampled_from([1, 3, 5]))
def test_child_categories_properties(seed, k):
    catalog = generate_synthetic_catalog(seed, 30, 4, 12)
    result = child_categories(catalog, None, k=k)
    assert len(result) <= k
    ids = [c.id for c in result]
    assert len(ids) == len(set(ids))
    pops = [catalog._subtree_popularity[c.id] for c in result]
    assert pops == sorted(pops, reverse=True)
