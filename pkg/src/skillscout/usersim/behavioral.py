"""Hand-authored user behavior for bootstrapping dialog logs.

This is the stand-in for real traffic: it reacts to offers with persona-driven
acceptance, asks for ratings or details (verbose users far more often), walks
away when its patience for rejected offers runs out, and occasionally goes off
script. First-time users lean toward browsing categories; returning users
convert on direct skill offers more readily. Those asymmetries are what the
trained intent model, and ultimately the learned policy, pick up.
"""

from __future__ import annotations

import numpy as np

from skillscout.catalog import Catalog
from skillscout.dialog.types import AgentMove, DialogContext
from skillscout.intents import UserIntent
from skillscout.usersim.profile import UserProfile
from skillscout.usersim.utterances import UtteranceBank, sample_utterance

# Acceptance multipliers on top of profile.accept_probability. A skill inside
# a category the user chose, or inside a preferred category, is an easy sell;
# a cold popularity offer is not, and first-time users are the hardest to
# convert that way.
PREFERRED_MULT = 1.0
CHOSEN_CATEGORY_MULT = 0.95
NEUTRAL_MULT = 0.16
NONPREF_MULT_RETURNING = 0.30
NONPREF_MULT_FIRST_TIME = 0.04
INFO_FOLLOWUP_BOOST = 1.5

INFO_ASK_VERBOSE = 0.30
INFO_ASK_BRIEF = 0.06

OOD_NOISE = 0.04
ABANDON_NOISE = 0.02

PREF_CATEGORY_PICK = 0.85
CATEGORY_PICK_FIRST_TIME = 0.62
CATEGORY_PICK_RETURNING = 0.45

# Willingness to pick from an unfamiliar category list grows with how many
# choices are on the table; a single take-it-or-leave-it category is weak.
LIST_SIZE_PICK_SCALE = {1: 0.45, 2: 0.65, 3: 0.8, 4: 0.9, 5: 1.0}


def _within_preferred(catalog: Catalog, category_id: str, preferred: tuple[str, ...]) -> bool:
    cur: str | None = category_id
    while cur is not None:
        if cur in preferred:
            return True
        cur = catalog.categories[cur].parent_id
    return False


def _weighted_choice(rng: np.random.Generator, options: list[tuple]) -> tuple:
    total = sum(w for _, w in options)
    r = rng.random() * total
    acc = 0.0
    for value, w in options:
        acc += w
        if r < acc:
            return value
    return options[-1][0]


def behavioral_intent(
    profile: UserProfile,
    move: AgentMove,
    context: DialogContext,
    catalog: Catalog,
    rng: np.random.Generator,
) -> tuple[UserIntent, str | int | None]:
    """Next user intent (and slot) under the scripted persona."""
    if context.rejected_offers > profile.patience:
        return UserIntent.STOP, None

    skill_live = context.proposed_skill is not None and any(
        it.kind == "skill" for it in context.offered_items
    )
    if skill_live:
        return _respond_to_skill(profile, context, catalog, rng)

    cat_items = [it for it in context.offered_items if it.kind == "category"]
    if cat_items:
        return _respond_to_categories(profile, context, catalog, rng, cat_items)

    return _respond_unanchored(profile, context, catalog, rng)


def _respond_to_skill(profile, context, catalog, rng):
    state = context.state
    sid = context.proposed_skill
    in_pref = any(
        catalog.skill_in_subtree(sid, c) for c in profile.preferred_categories
    )
    in_chosen = (
        context.has_selected
        and state.target_category is not None
        and catalog.skill_in_subtree(sid, state.target_category)
    )
    if in_pref:
        mult = PREFERRED_MULT
    elif in_chosen:
        mult = CHOSEN_CATEGORY_MULT
    elif not profile.preferred_categories:
        mult = NEUTRAL_MULT
    else:
        mult = NONPREF_MULT_RETURNING if not profile.first_time else NONPREF_MULT_FIRST_TIME
    if state.user_intent in (UserIntent.GET_RATING, UserIntent.GET_DETAILS):
        mult *= INFO_FOLLOWUP_BOOST
    if rng.random() < min(1.0, profile.accept_probability * mult):
        return UserIntent.YES, None

    if context.asked_info_for != sid:
        p_info = INFO_ASK_VERBOSE if profile.style == "verbose" else INFO_ASK_BRIEF
        if rng.random() < p_info:
            context.asked_info_for = sid
            intent = UserIntent.GET_RATING if rng.random() < 0.7 else UserIntent.GET_DETAILS
            return intent, None

    r = rng.random()
    if r < OOD_NOISE:
        return UserIntent.OUT_OF_DOMAIN, None
    if r < OOD_NOISE + ABANDON_NOISE:
        return UserIntent.END, None

    options: list[tuple] = [((UserIntent.NO, None), 0.45)]
    if profile.first_time:
        options.append(((UserIntent.OTHER_CATEGORY, None), 0.33))
        options.append(((UserIntent.OTHER_SKILL, None), 0.12))
    else:
        options.append(((UserIntent.OTHER_SKILL, None), 0.25))
        options.append(((UserIntent.OTHER_CATEGORY, None), 0.20))
    if profile.preferred_categories:
        pref = profile.preferred_categories[int(rng.integers(0, len(profile.preferred_categories)))]
        options.append(((UserIntent.CATEGORY_NAME, pref), 0.10))
    return _weighted_choice(rng, options)


def _respond_to_categories(profile, context, catalog, rng, cat_items):
    pref_hits = [
        it for it in cat_items
        if _within_preferred(catalog, it.id, profile.preferred_categories)
    ]
    if pref_hits and rng.random() < PREF_CATEGORY_PICK:
        it = pref_hits[int(rng.integers(0, len(pref_hits)))]
        if rng.random() < 0.7:
            return UserIntent.CATEGORY_NAME, it.id
        return UserIntent.SELECT_OPTION, context.offered_items.index(it) + 1

    r = rng.random()
    if r < OOD_NOISE:
        return UserIntent.OUT_OF_DOMAIN, None
    if r < OOD_NOISE + ABANDON_NOISE:
        return UserIntent.END, None

    p_pick = CATEGORY_PICK_FIRST_TIME if profile.first_time else CATEGORY_PICK_RETURNING
    p_pick *= LIST_SIZE_PICK_SCALE.get(min(len(cat_items), 5), 1.0)
    if rng.random() < p_pick:
        it = cat_items[int(rng.integers(0, len(cat_items)))]
        if rng.random() < 0.7:
            return UserIntent.CATEGORY_NAME, it.id
        return UserIntent.SELECT_OPTION, context.offered_items.index(it) + 1

    options: list[tuple] = [
        ((UserIntent.OTHER_CATEGORY, None), 0.52),
        ((UserIntent.NO, None), 0.27),
        ((UserIntent.STOP, None), 0.06),
    ]
    if context.category_stack:
        options.append(((UserIntent.GO_BACK, None), 0.08))
    if profile.first_time:
        options.append(((UserIntent.HELP, None), 0.07))
    return _weighted_choice(rng, options)


def _respond_unanchored(profile, context, catalog, rng):
    r = rng.random()
    if r < OOD_NOISE:
        return UserIntent.OUT_OF_DOMAIN, None
    if r < OOD_NOISE + ABANDON_NOISE:
        return UserIntent.END, None
    if profile.preferred_categories and rng.random() < 0.6:
        pref = profile.preferred_categories[int(rng.integers(0, len(profile.preferred_categories)))]
        return UserIntent.CATEGORY_NAME, pref
    roots = list(context_roots(catalog))
    options: list[tuple] = [
        ((UserIntent.OTHER_CATEGORY, None), 0.45),
        ((UserIntent.HELP, None), 0.20),
        ((UserIntent.STOP, None), 0.10),
    ]
    if roots:
        root = roots[int(rng.integers(0, len(roots)))]
        options.append(((UserIntent.CATEGORY_NAME, root), 0.25))
    return _weighted_choice(rng, options)


def context_roots(catalog: Catalog):
    return catalog.root_category_ids


class BehavioralUser:
    """Adapter giving the scripted persona the environment's user interface."""

    def __init__(self, catalog: Catalog, templates: UtteranceBank, rng: np.random.Generator):
        self.catalog = catalog
        self.templates = templates
        self.rng = rng

    def start_utterance(self) -> str:
        return sample_utterance(UserIntent.START, None, self.templates, self.rng)

    def respond(self, context: DialogContext, move: AgentMove):
        intent, slot = behavioral_intent(context.profile, move, context, self.catalog, self.rng)
        utterance = sample_utterance(intent, _slot_label(self.catalog, intent, slot),
                                     self.templates, self.rng)
        return intent, slot, utterance


def _slot_label(catalog: Catalog, intent: UserIntent, slot) -> str | int | None:
    if intent is UserIntent.CATEGORY_NAME and slot is not None:
        return catalog.categories[slot].name
    if intent is UserIntent.SKILL_NAME and slot is not None:
        return catalog.skills[slot].name
    return slot
