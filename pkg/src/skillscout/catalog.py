"""Skill catalog: skills, the category tree, and ranked lookups.

The catalog is immutable once built. Ranking order is popularity descending
with ascending-id tie-breaks so that every query is deterministic; category
offers rank by total subtree popularity under the same tie-break.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from skillscout.intents import MetadataType

CATALOG_FORMAT_VERSION = 1


class CatalogError(ValueError):
    """Malformed or inconsistent catalog data."""


@dataclass(frozen=True)
class Skill:
    id: str
    name: str
    category_ids: frozenset[str]
    popularity: int
    rating: float
    review_count: int
    short_description: str = ""
    trending: bool = False
    recommended: bool = False


@dataclass(frozen=True)
class Category:
    id: str
    name: str
    parent_id: str | None = None
    child_category_ids: tuple[str, ...] = ()
    skill_ids: tuple[str, ...] = ()


@dataclass
class Catalog:
    skills: dict[str, Skill]
    categories: dict[str, Category]
    root_category_ids: tuple[str, ...]
    # Derived indexes, filled by _build_indexes.
    _subtree_skills: dict[str | None, tuple[str, ...]] = field(default_factory=dict, repr=False)
    _subtree_skill_sets: dict[str | None, frozenset[str]] = field(default_factory=dict, repr=False)
    _subtree_popularity: dict[str, int] = field(default_factory=dict, repr=False)
    _ranked_children: dict[str | None, tuple[str, ...]] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        validate_catalog(self)
        self._build_indexes()

    @property
    def category_count(self) -> int:
        return len(self.categories)

    @property
    def skill_count(self) -> int:
        return len(self.skills)

    def category_ids_sorted(self) -> list[str]:
        return sorted(self.categories)

    def skill_in_subtree(self, skill_id: str, category_id: str | None) -> bool:
        return skill_id in self._subtree_skill_sets.get(category_id, frozenset())

    def _build_indexes(self) -> None:
        ranked_all = _rank_skills(self.skills.values())
        subtree_skills: dict[str | None, tuple[str, ...]] = {None: ranked_all}
        subtree_pop: dict[str, int] = {}

        def visit(cat_id: str) -> tuple[set[str], int]:
            cat = self.categories[cat_id]
            ids = set(cat.skill_ids)
            pop = sum(self.skills[s].popularity for s in cat.skill_ids)
            for child in cat.child_category_ids:
                child_ids, child_pop = visit(child)
                ids |= child_ids
                pop += child_pop
            subtree_skills[cat_id] = _rank_skills(self.skills[s] for s in ids)
            subtree_pop[cat_id] = pop
            return ids, pop

        for root in self.root_category_ids:
            visit(root)
        self._subtree_skills = subtree_skills
        self._subtree_skill_sets = {k: frozenset(v) for k, v in subtree_skills.items()}
        self._subtree_popularity = subtree_pop

        def rank_cats(ids: tuple[str, ...]) -> tuple[str, ...]:
            return tuple(sorted(ids, key=lambda c: (-subtree_pop[c], c)))

        ranked_children: dict[str | None, tuple[str, ...]] = {None: rank_cats(self.root_category_ids)}
        for cat_id, cat in self.categories.items():
            ranked_children[cat_id] = rank_cats(cat.child_category_ids)
        self._ranked_children = ranked_children


def _rank_skills(skills) -> tuple[str, ...]:
    return tuple(s.id for s in sorted(skills, key=lambda s: (-s.popularity, s.id)))


def validate_catalog(catalog: Catalog) -> None:
    """Check every catalog invariant, raising CatalogError naming the first violation."""
    for skill in catalog.skills.values():
        if not skill.category_ids:
            raise CatalogError(f"skill {skill.id!r} belongs to no category")
        if not 0.0 <= skill.rating <= 5.0:
            raise CatalogError(f"skill {skill.id!r} rating {skill.rating} out of range [0, 5]")
        if skill.review_count < 0:
            raise CatalogError(f"skill {skill.id!r} has negative review_count")
        if skill.popularity < 0:
            raise CatalogError(f"skill {skill.id!r} has negative popularity")
        for cid in skill.category_ids:
            if cid not in catalog.categories:
                raise CatalogError(f"skill {skill.id!r} references unknown category {cid!r}")

    seen_as_child: dict[str, str] = {}
    for cat in catalog.categories.values():
        if cat.parent_id is not None and cat.parent_id not in catalog.categories:
            raise CatalogError(f"category {cat.id!r} references unknown parent {cat.parent_id!r}")
        for child in cat.child_category_ids:
            if child not in catalog.categories:
                raise CatalogError(f"category {cat.id!r} references unknown child {child!r}")
            if child in seen_as_child:
                raise CatalogError(f"category {child!r} appears in two parent child lists")
            seen_as_child[child] = cat.id
            if catalog.categories[child].parent_id != cat.id:
                raise CatalogError(f"category {child!r} parent link disagrees with {cat.id!r} child list")
        for sid in cat.skill_ids:
            if sid not in catalog.skills:
                raise CatalogError(f"category {cat.id!r} references unknown skill {sid!r}")
            if cat.id not in catalog.skills[sid].category_ids:
                raise CatalogError(f"skill {sid!r} does not list category {cat.id!r}")

    for root in catalog.root_category_ids:
        if root not in catalog.categories:
            raise CatalogError(f"unknown root category {root!r}")
        if catalog.categories[root].parent_id is not None:
            raise CatalogError(f"root category {root!r} has a parent")

    # Parent/child links must form a forest rooted at root_category_ids.
    reachable: set[str] = set()
    for root in catalog.root_category_ids:
        stack = [root]
        while stack:
            cid = stack.pop()
            if cid in reachable:
                raise CatalogError(f"category cycle detected at {cid!r}")
            reachable.add(cid)
            stack.extend(catalog.categories[cid].child_category_ids)
    for cid, cat in catalog.categories.items():
        if cid not in reachable:
            if cat.parent_id == cid:
                raise CatalogError(f"category {cid!r} is its own parent")
            raise CatalogError(f"category {cid!r} is unreachable from any root")


def load_catalog(path: str | Path) -> Catalog:
    """Load and validate a catalog file (JSON, format_version 1)."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"catalog file {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise CatalogError("catalog document must be a JSON object")
    version = doc.get("format_version")
    if version != CATALOG_FORMAT_VERSION:
        raise CatalogError(f"unsupported catalog format_version {version!r}")
    return catalog_from_dict(doc)


def catalog_from_dict(doc: dict) -> Catalog:
    try:
        skills = {
            rec["id"]: Skill(
                id=rec["id"],
                name=rec["name"],
                category_ids=frozenset(rec["category_ids"]),
                popularity=int(rec["popularity"]),
                rating=float(rec["rating"]),
                review_count=int(rec["review_count"]),
                short_description=rec.get("short_description", ""),
                trending=bool(rec.get("trending", False)),
                recommended=bool(rec.get("recommended", False)),
            )
            for rec in doc["skills"]
        }
        categories = {
            rec["id"]: Category(
                id=rec["id"],
                name=rec["name"],
                parent_id=rec.get("parent_id"),
                child_category_ids=tuple(rec.get("child_category_ids", ())),
                skill_ids=tuple(rec.get("skill_ids", ())),
            )
            for rec in doc["categories"]
        }
    except (KeyError, TypeError) as exc:
        raise CatalogError(f"catalog record missing field: {exc}") from exc
    roots = tuple(c.id for c in categories.values() if c.parent_id is None)
    return Catalog(skills=skills, categories=categories, root_category_ids=roots)


def catalog_to_dict(catalog: Catalog) -> dict:
    return {
        "format_version": CATALOG_FORMAT_VERSION,
        "skills": [
            {
                "id": s.id,
                "name": s.name,
                "category_ids": sorted(s.category_ids),
                "popularity": s.popularity,
                "rating": s.rating,
                "review_count": s.review_count,
                "short_description": s.short_description,
                "trending": s.trending,
                "recommended": s.recommended,
            }
            for s in sorted(catalog.skills.values(), key=lambda s: s.id)
        ],
        "categories": [
            {
                "id": c.id,
                "name": c.name,
                "parent_id": c.parent_id,
                "child_category_ids": list(c.child_category_ids),
                "skill_ids": list(c.skill_ids),
            }
            for c in sorted(catalog.categories.values(), key=lambda c: c.id)
        ],
    }


def write_catalog(catalog: Catalog, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(catalog_to_dict(catalog), fh, indent=1)
        fh.write("\n")


def top_skills(
    catalog: Catalog,
    category_id: str | None,
    n: int,
    exclude: set[str] | frozenset[str] = frozenset(),
) -> list[Skill]:
    """Up to n most popular skills of a category subtree (whole catalog when None).

    Sorted by popularity descending, ties by ascending id; skills in
    `exclude` are skipped. Returns fewer than n when candidates run out.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if category_id is not None and category_id not in catalog.categories:
        raise KeyError(f"unknown category {category_id!r}")
    out: list[Skill] = []
    for sid in catalog._subtree_skills[category_id]:
        if sid in exclude:
            continue
        out.append(catalog.skills[sid])
        if len(out) == n:
            break
    return out


def child_categories(
    catalog: Catalog,
    category_id: str | None,
    k: int,
    exclude: set[str] | frozenset[str] = frozenset(),
) -> list[Category]:
    """Up to k child categories (roots when category_id is None).

    Ordered by total subtree popularity descending, ties by ascending id.
    """
    if k not in (1, 3, 5):
        raise ValueError(f"k must be one of 1, 3, 5, got {k}")
    if category_id is not None and category_id not in catalog.categories:
        raise KeyError(f"unknown category {category_id!r}")
    out: list[Category] = []
    for cid in catalog._ranked_children[category_id]:
        if cid in exclude:
            continue
        out.append(catalog.categories[cid])
        if len(out) == k:
            break
    return out


def skill_metadata(skill: Skill, metadata_type: MetadataType) -> dict:
    """Bindings a prompt template needs to render the given metadata type."""
    if metadata_type is MetadataType.NO_METADATA:
        return {}
    if metadata_type is MetadataType.SHORT_DESCRIPTION:
        return {"description": skill.short_description}
    if metadata_type is MetadataType.TRENDING:
        return {"trending": skill.trending}
    if metadata_type is MetadataType.RECOMMENDED:
        return {"recommended": skill.recommended}
    if metadata_type is MetadataType.RATING_REVIEW:
        return {"rating": skill.rating, "reviews": skill.review_count}
    raise ValueError(f"unknown metadata type {metadata_type!r}")


# Word pools for synthetic generation. Category words intentionally include
# the ones real game catalogs use so hand-written dialog fixtures read well.
_CATEGORY_WORDS = [
    "adventure", "trivia", "word", "history", "mystery", "family", "sports",
    "geography", "puzzle", "guessing", "strategy", "multiplayer", "kids",
    "music", "science", "fantasy", "horror", "racing", "space", "animal",
    "movie", "retro", "party", "math", "memory", "logic", "detective",
    "pirate", "zombie", "wizard", "castle", "jungle", "ocean", "desert",
    "arcade", "board", "card", "dice", "quiz", "story", "escape", "battle",
    "farm", "city", "train", "treasure", "knight", "dragon", "robot", "alien",
    "ninja", "cooking", "travel", "nature", "weather", "holiday", "school",
    "office", "circus", "safari",
]
_CHILD_WORDS = ["kids", "classic", "daily", "pro", "lite", "family", "expert", "junior", "deluxe", "mini"]
_ADJECTIVES = [
    "Ultimate", "Amazing", "Super", "Mega", "Epic", "Crazy", "Quick", "Grand",
    "Mighty", "Clever", "Lucky", "Brave", "Wild", "Secret", "Golden", "Royal",
    "Turbo", "Cosmic", "Magic", "Happy",
]
_NOUNS = [
    "Quiz", "Master", "Challenge", "Quest", "Adventure", "Arena", "Academy",
    "Saga", "Mania", "Hunt", "Trial", "Club", "World", "Land", "Party",
    "Legend", "Puzzle", "Showdown", "Night", "Hero",
]


def generate_synthetic_catalog(
    seed: int,
    n_skills: int,
    n_roots: int,
    n_total_categories: int,
) -> Catalog:
    """Build a deterministic synthetic catalog at the requested shape.

    Popularity follows a heavy-tailed rank curve; ratings cluster near 4.0.
    The result is a pure function of the arguments.
    """
    if n_roots > n_total_categories:
        raise ValueError(
            f"infeasible shape: n_roots={n_roots} exceeds n_total_categories={n_total_categories}"
        )
    if n_skills < n_roots:
        raise ValueError(
            f"infeasible shape: {n_skills} skills cannot populate {n_roots} root categories"
        )
    if n_skills < 1 or n_roots < 1:
        raise ValueError("n_skills and n_roots must be >= 1")

    rng = np.random.default_rng(seed)

    def cat_name(i: int) -> str:
        if i < len(_CATEGORY_WORDS):
            return _CATEGORY_WORDS[i]
        return f"{_CATEGORY_WORDS[i % len(_CATEGORY_WORDS)]} {i // len(_CATEGORY_WORDS)}"

    cat_names = [cat_name(i) for i in range(n_total_categories)]
    roots = cat_names[:n_roots]
    parent_of: dict[str, str | None] = {name: None for name in roots}
    children_of: dict[str, list[str]] = {name: [] for name in cat_names}

    # Attach non-root categories under seeded random parents, depth <= 2,
    # renaming children after their parent so ids stay readable and unique.
    final_names: dict[str, str] = {name: name for name in roots}
    for raw in cat_names[n_roots:]:
        parent = roots[int(rng.integers(0, n_roots))]
        suffix = _CHILD_WORDS[len(children_of[parent]) % len(_CHILD_WORDS)]
        name = f"{parent} {suffix}"
        if name in final_names.values():
            name = f"{name} {len(final_names)}"
        final_names[raw] = name
        parent_of[name] = parent
        children_of[parent].append(name)
        children_of[name] = []

    all_names = list(final_names.values())
    cat_id = {name: name.replace(" ", "-") for name in all_names}
    leaf_names = [n for n in all_names if not children_of[n]]

    skills: dict[str, Skill] = {}
    skills_in_cat: dict[str, list[str]] = {cat_id[n]: [] for n in all_names}
    used_names: set[str] = set()
    for i in range(n_skills):
        # Seed every leaf with at least one skill before spreading the rest.
        home = leaf_names[i % len(leaf_names)] if i < len(leaf_names) else (
            leaf_names[int(rng.integers(0, len(leaf_names)))]
        )
        adj = _ADJECTIVES[int(rng.integers(0, len(_ADJECTIVES)))]
        noun = _NOUNS[int(rng.integers(0, len(_NOUNS)))]
        theme = home.split()[0].title()
        name = f"{adj} {theme} {noun}"
        if name in used_names:
            name = f"{name} {i}"
        used_names.add(name)
        sid = name.lower().replace(" ", "-").replace("!", "").replace("'", "")
        rank = i + 1
        popularity = int(50000 / rank**0.8) + int(rng.integers(0, 50))
        rating = round(float(np.clip(rng.normal(4.0, 0.5), 0.0, 5.0)), 1)
        reviews = int(popularity * rng.uniform(0.05, 0.3))
        cats = {cat_id[home]}
        if rng.random() < 0.15:
            extra = leaf_names[int(rng.integers(0, len(leaf_names)))]
            cats.add(cat_id[extra])
        skills[sid] = Skill(
            id=sid,
            name=name,
            category_ids=frozenset(cats),
            popularity=popularity,
            rating=rating,
            review_count=reviews,
            short_description=f"A {home} game where you chase the {noun.lower()} crown.",
            trending=bool(rank <= max(1, n_skills // 10) and rng.random() < 0.6),
            recommended=bool(rating >= 4.3 and rng.random() < 0.5),
        )
        for cid in cats:
            skills_in_cat[cid].append(sid)

    categories = {
        cat_id[name]: Category(
            id=cat_id[name],
            name=name,
            parent_id=cat_id[parent_of[name]] if parent_of[name] else None,
            child_category_ids=tuple(cat_id[c] for c in children_of[name]),
            skill_ids=tuple(sorted(skills_in_cat[cat_id[name]])),
        )
        for name in all_names
    }
    return Catalog(
        skills=skills,
        categories=categories,
        root_category_ids=tuple(cat_id[r] for r in roots),
    )
