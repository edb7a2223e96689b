import json

import numpy as np
import pytest

from skillscout.dialog.env import apply_action, observe_user, reset
from skillscout.intents import AgentAction, UserIntent
from skillscout.nlu import (
    NluError,
    PatternRule,
    classify,
    compile_rules,
    load_rules,
    normalize,
)
from skillscout.usersim.profile import UserProfile
from skillscout.usersim.utterances import ORDINAL_WORDS, sample_utterance


@pytest.fixture
def offered_context(toy_catalog, prompts, rng):
    """A context where the three root categories were just offered."""
    ctx = reset(toy_catalog, UserProfile(first_time=True))
    apply_action(ctx, AgentAction.OFFER_THREE_CATEGORIES, toy_catalog, prompts, rng)
    return ctx


def test_category_after_offer(offered_context, toy_catalog, rules):
    result = classify("history games", offered_context, toy_catalog, rules)
    assert result.intent is UserIntent.CATEGORY_NAME
    assert result.resolved_slot == "history"
    assert result.confidence == "matched"


def test_no_give_me_word_games(offered_context, toy_catalog, rules):
    result = classify("No, give me word games", offered_context, toy_catalog, rules)
    assert result.intent is UserIntent.CATEGORY_NAME
    assert result.resolved_slot == "word"


def test_rating_resolves_proposed_skill(toy_catalog, prompts, rules, rng):
    ctx = reset(toy_catalog, UserProfile(first_time=True))
    observe_user(ctx, UserIntent.CATEGORY_NAME, "word", toy_catalog)
    apply_action(ctx, AgentAction.OFFER_ONE_SKILL, toy_catalog, prompts, rng)
    result = classify("What's its rating?", ctx, toy_catalog, rules)
    assert result.intent is UserIntent.GET_RATING
    assert result.resolved_slot == "amazing-word-master-game"


def test_gibberish_falls_back(offered_context, toy_catalog, rules):
    result = classify("flurble glorp", offered_context, toy_catalog, rules)
    assert result.intent is UserIntent.OUT_OF_DOMAIN
    assert result.confidence == "fallback"


def test_ordinal_selection(offered_context, toy_catalog, rules):
    result = classify("the first one", offered_context, toy_catalog, rules)
    assert result.intent is UserIntent.SELECT_OPTION
    assert result.resolved_index == 1
    assert result.resolved_slot == offered_context.offered_items[0].id


def test_ordinal_out_of_range_unresolved(offered_context, toy_catalog, rules):
    result = classify("the fifth one", offered_context, toy_catalog, rules)
    assert result.intent is UserIntent.SELECT_OPTION
    assert result.resolved_index is None


def test_skill_name_resolution(offered_context, toy_catalog, rules):
    result = classify("play Amazing Word Master Game", offered_context, toy_catalog, rules)
    assert result.intent is UserIntent.SKILL_NAME
    assert result.resolved_slot == "amazing-word-master-game"


def test_bare_skill_name(offered_context, toy_catalog, rules):
    result = classify("The Vortex", offered_context, toy_catalog, rules)
    assert result.intent is UserIntent.SKILL_NAME
    assert result.resolved_slot == "the-vortex"


def test_unresolvable_slot_kept_raw(offered_context, toy_catalog, rules):
    result = classify("give me flurble games", offered_context, toy_catalog, rules)
    assert result.intent is UserIntent.CATEGORY_NAME
    assert result.slot == "flurble"
    assert result.resolved_slot is None


def test_classify_total_and_deterministic(offered_context, toy_catalog, rules):
    rng = np.random.default_rng(0)
    for _ in range(200):
        junk = "".join(chr(int(c)) for c in rng.integers(32, 127, size=12))
        a = classify(junk, offered_context, toy_catalog, rules)
        b = classify(junk, offered_context, toy_catalog, rules)
        assert a == b
        assert a.intent in UserIntent


def test_shipped_rules_cover_all_intents(rules):
    covered = {r.intent for r in rules}
    assert covered == set(UserIntent)


def test_load_rules_missing_intent_named(tmp_path, rules):
    doc = {
        "format_version": 1,
        "rules": [
            {"intent": r.intent.value, "patterns": list(r.patterns), "priority": r.priority}
            for r in rules
            if r.intent is not UserIntent.STOP
        ],
    }
    path = tmp_path / "rules.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(NluError, match="stop"):
        load_rules(path)


def test_load_rules_slot_marker_validation(tmp_path):
    doc = {
        "format_version": 1,
        "rules": [{"intent": "category-name", "patterns": ["no slot here"], "priority": 5}],
    }
    path = tmp_path / "rules.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(NluError, match="exactly one slot"):
        load_rules(path)


def test_load_rules_parse_error(tmp_path):
    path = tmp_path / "rules.json"
    path.write_text("{oops")
    with pytest.raises(NluError, match="not valid JSON"):
        load_rules(path)


def test_duplicate_pattern_higher_priority_wins(offered_context, toy_catalog):
    rules = [
        PatternRule(UserIntent.STOP, ("magic word",), priority=50),
        PatternRule(UserIntent.HELP, ("magic word",), priority=90),
        PatternRule(UserIntent.OUT_OF_DOMAIN, ("zzz",), priority=1),
    ]
    result = classify("magic word", offered_context, toy_catalog, rules)
    assert result.intent is UserIntent.HELP


def test_closed_loop_template_consistency(toy_catalog, prompts, bank, rules, rng):
    """Every shipped utterance template classifies back to its intent."""
    compiled = compile_rules(rules)
    ctx = reset(toy_catalog, UserProfile(first_time=True))
    apply_action(ctx, AgentAction.OFFER_THREE_CATEGORIES, toy_catalog, prompts, rng)
    slots = {
        UserIntent.CATEGORY_NAME: "history",
        UserIntent.SKILL_NAME: "Word Safari",
        UserIntent.SELECT_OPTION: 2,
    }
    for intent in UserIntent:
        if intent is UserIntent.START:
            continue  # start only opens a session; mid-dialog it is not expected
        for template in bank.for_intent(intent):
            rng_local = np.random.default_rng(1)
            from skillscout.usersim.utterances import UtteranceBank

            single = UtteranceBank({**bank.templates, intent: [template]})
            utterance = sample_utterance(intent, slots.get(intent), single, rng_local)
            result = classify(utterance, ctx, toy_catalog, compiled)
            assert result.intent is intent, (template, utterance, result)


def test_start_templates_classify_at_session_open(toy_catalog, bank, rules):
    ctx = reset(toy_catalog, UserProfile(first_time=True))
    for template in bank.for_intent(UserIntent.START):
        result = classify(template, ctx, toy_catalog, rules)
        assert result.intent is UserIntent.START, template


def test_normalize():
    assert normalize("  What's  ITS rating?! ") == "what's its rating"
    assert normalize("no, give me word games") == "no give me word games"


def test_ordinal_words_cover_offer_sizes():
    assert len(ORDINAL_WORDS) == 5
