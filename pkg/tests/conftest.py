import numpy as np
import pytest

from skillscout.catalog import Catalog, Category, Skill, generate_synthetic_catalog
from skillscout.dialog.prompts import load_prompt_catalog
from skillscout.nlu import load_rules
from skillscout.usersim.profile import UserProfile
from skillscout.usersim.utterances import load_utterance_bank


def build_toy_catalog() -> Catalog:
    """Three root categories with the skills the example dialogs mention."""
    skills = {
        "ultimate-history-quiz": Skill(
            id="ultimate-history-quiz", name="Ultimate History Quiz",
            category_ids=frozenset({"history"}), popularity=900, rating=4.2,
            review_count=500, short_description="Battle through the ages.",
        ),
        "history-heroes": Skill(
            id="history-heroes", name="History Heroes",
            category_ids=frozenset({"history"}), popularity=300, rating=3.9,
            review_count=120, short_description="Meet the greats.",
        ),
        "amazing-word-master-game": Skill(
            id="amazing-word-master-game", name="Amazing Word Master Game",
            category_ids=frozenset({"word"}), popularity=800, rating=3.5,
            review_count=220, short_description="Spell your way to glory.",
        ),
        "word-safari": Skill(
            id="word-safari", name="Word Safari",
            category_ids=frozenset({"word"}), popularity=250, rating=4.1,
            review_count=90, short_description="Hunt for hidden words.",
        ),
        "the-vortex": Skill(
            id="the-vortex", name="The Vortex",
            category_ids=frozenset({"trivia"}), popularity=700, rating=4.0,
            review_count=912, short_description="Trivia with a twist.",
            trending=True, recommended=True,
        ),
        "trivia-titans": Skill(
            id="trivia-titans", name="Trivia Titans",
            category_ids=frozenset({"trivia"}), popularity=400, rating=4.4,
            review_count=310, short_description="Fast-paced quiz duels.",
        ),
    }
    categories = {
        "trivia": Category(id="trivia", name="trivia",
                           skill_ids=("the-vortex", "trivia-titans")),
        "history": Category(id="history", name="history",
                            skill_ids=("history-heroes", "ultimate-history-quiz")),
        "word": Category(id="word", name="word",
                         skill_ids=("amazing-word-master-game", "word-safari")),
    }
    return Catalog(skills=skills, categories=categories,
                   root_category_ids=("trivia", "history", "word"))


@pytest.fixture(scope="session")
def toy_catalog() -> Catalog:
    return build_toy_catalog()


@pytest.fixture(scope="session")
def desk_catalog() -> Catalog:
    return generate_synthetic_catalog(seed=7, n_skills=200, n_roots=8, n_total_categories=25)


@pytest.fixture(scope="session")
def paper_catalog() -> Catalog:
    return generate_synthetic_catalog(seed=7, n_skills=1903, n_roots=48, n_total_categories=191)


@pytest.fixture(scope="session")
def prompts():
    return load_prompt_catalog()


@pytest.fixture(scope="session")
def bank():
    return load_utterance_bank()


@pytest.fixture(scope="session")
def rules():
    return load_rules()


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def first_time_profile():
    return UserProfile(first_time=True, preferred_categories=("history",))


@pytest.fixture
def returning_profile():
    return UserProfile(first_time=False, preferred_categories=("word",))
