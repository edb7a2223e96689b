"""The dialog MDP: masking, transitions, reward, and the rule-based policy.

Conventions:
- turn_depth counts user turns; the start intent is turn 1.
- Rewards are terminal-only: +1 when a skill launches, -1 when the user or
  agent ends the dialog, 0 otherwise.
- A context is mutated in place by apply_action/observe_user; step composes
  them and appends one TurnRecord per agent decision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from skillscout.catalog import Catalog, child_categories, skill_metadata, top_skills
from skillscout.dialog.prompts import PromptCatalog, render_prompt
from skillscout.dialog.types import (
    AgentMove,
    DialogContext,
    DialogState,
    OfferItem,
    TurnRecord,
    TURN_DEPTH_CAP,
)
from skillscout.intents import (
    ACTION_INDEX,
    ACTION_ORDER,
    CATEGORY_OFFER_ACTIONS,
    CATEGORY_OFFER_K,
    EXECUTE_INTENTS,
    N_ACTIONS,
    SKILL_OFFER_ACTIONS,
    SLOTTED_INTENTS,
    AgentAction,
    MetadataType,
    UserIntent,
)


class DialogError(ValueError):
    pass


class MaskViolation(DialogError):
    """An action was applied that the current mask forbids."""


def reset(catalog: Catalog, profile, rng=None) -> DialogContext:
    """Fresh session context: the user has just said the start intent."""
    state = DialogState(
        user_intent=UserIntent.START,
        prev_agent_action=None,
        prev_prompt=None,
        prev_metadata=MetadataType.NO_METADATA,
        target_category=None,
        first_time_user=profile.first_time,
        turn_depth=1,
    )
    return DialogContext(state=state, profile=profile)


def _category_pool(context: DialogContext, catalog: Catalog, k: int):
    """Unexhausted categories at the current position, walking up to the roots
    when the current subtree is spent."""
    position = context.state.target_category
    while True:
        pool = child_categories(catalog, position, k, context.exhausted_categories)
        if pool:
            return pool
        if position is None:
            return []
        position = catalog.categories[position].parent_id


def _has_offerable_skill(context: DialogContext, catalog: Catalog) -> bool:
    if context.requested_skill is not None:
        return True
    scope = context.state.target_category
    return bool(top_skills(catalog, scope, 1, context.exhausted_in(scope)))


def action_mask(context: DialogContext, catalog: Catalog) -> np.ndarray:
    """Boolean validity vector over the 8 agent actions; end-session is always valid."""
    mask = np.zeros(N_ACTIONS, dtype=bool)
    state = context.state
    accepted = state.user_intent is UserIntent.YES or (
        state.user_intent is UserIntent.SELECT_OPTION and context.selection_was_skill
    )
    mask[ACTION_INDEX[AgentAction.LAUNCH_SKILL]] = context.proposed_skill is not None and accepted

    has_skill = _has_offerable_skill(context, catalog)
    mask[ACTION_INDEX[AgentAction.OFFER_ONE_SKILL]] = has_skill
    mask[ACTION_INDEX[AgentAction.OFFER_ONE_SKILL_OR_CATEGORY]] = has_skill

    has_category = bool(_category_pool(context, catalog, 1))
    for action in CATEGORY_OFFER_ACTIONS:
        mask[ACTION_INDEX[action]] = has_category

    mask[ACTION_INDEX[AgentAction.EXECUTE]] = state.user_intent in EXECUTE_INTENTS
    mask[ACTION_INDEX[AgentAction.END_SESSION]] = True
    return mask


def _category_label(catalog: Catalog, category_id: str) -> str:
    name = catalog.categories[category_id].name
    return name if name.endswith("games") else f"{name} games"


def _join_labels(labels: list[str]) -> str:
    if not labels:
        return ""
    if len(labels) == 1:
        return labels[0]
    return ", ".join(labels[:-1]) + ", or " + labels[-1]


def _offer_labels(catalog: Catalog, items: list[OfferItem]) -> list[str]:
    return [
        catalog.skills[it.id].name if it.kind == "skill" else _category_label(catalog, it.id)
        for it in items
    ]


def _skill_metadata_pool(skill) -> list[MetadataType]:
    pool = [MetadataType.NO_METADATA, MetadataType.SHORT_DESCRIPTION, MetadataType.RATING_REVIEW]
    if skill.trending:
        pool.append(MetadataType.TRENDING)
    if skill.recommended:
        pool.append(MetadataType.RECOMMENDED)
    return pool


def apply_action(
    context: DialogContext,
    action: AgentAction,
    catalog: Catalog,
    prompts: PromptCatalog,
    rng: np.random.Generator,
) -> AgentMove:
    """Perform the agent's side of a turn: pick prompt/metadata, update offers."""
    mask = action_mask(context, catalog)
    if not mask[ACTION_INDEX[action]]:
        raise MaskViolation(f"action {action.value} is masked in the current state")

    state = context.state
    user_tag = "first-time" if state.first_time_user else "returning"
    tags = {user_tag}
    metadata = MetadataType.NO_METADATA
    bindings: dict = {}
    offered: list[OfferItem] = []
    launched: str | None = None
    terminal = False
    keep_prompt_text = False

    if action in SKILL_OFFER_ACTIONS:
        scope = state.target_category
        if context.requested_skill is not None:
            skill = catalog.skills[context.requested_skill]
            context.requested_skill = None
        else:
            skill = top_skills(catalog, scope, 1, context.exhausted_in(scope))[0]
        context.exhausted_in(scope).add(skill.id)
        pool = _skill_metadata_pool(skill)
        metadata = pool[int(rng.integers(0, len(pool)))]
        bindings = {"skill": skill.name, **skill_metadata(skill, metadata)}
        offered = [OfferItem("skill", skill.id)]
        context.proposed_skill = skill.id
        context.offered_items = offered
        context.selection_was_skill = False

    elif action in CATEGORY_OFFER_ACTIONS:
        cats = _category_pool(context, catalog, CATEGORY_OFFER_K[action])
        for cat in cats:
            context.exhausted_categories.add(cat.id)
        offered = [OfferItem("category", c.id) for c in cats]
        labels = [_category_label(catalog, c.id) for c in cats]
        if action is AgentAction.OFFER_ONE_CATEGORY:
            bindings = {"category": cats[0].name}
        else:
            bindings = {"categories": _join_labels(labels)}
        context.proposed_skill = None
        context.offered_items = offered
        context.selection_was_skill = False

    elif action is AgentAction.LAUNCH_SKILL:
        launched = context.proposed_skill
        bindings = {"skill": catalog.skills[launched].name}
        terminal = True

    elif action is AgentAction.END_SESSION:
        if context.misunderstanding_count >= 3:
            tags.add("misunderstood")
        terminal = True

    elif action is AgentAction.EXECUTE:
        tags, bindings, offered, keep_prompt_text = _execute_handler(context, catalog, tags)

    else:  # pragma: no cover - exhaustive over AgentAction
        raise DialogError(f"unhandled action {action!r}")

    prompt = prompts.pick(action, tags, metadata, rng)
    text = render_prompt(prompt.template, bindings)

    state.prev_agent_action = action
    state.prev_prompt = prompt.prompt_id
    state.prev_metadata = metadata
    if not keep_prompt_text:
        context.last_prompt_text = text
    if terminal:
        context.done = True
    return AgentMove(
        action=action,
        prompt_id=prompt.prompt_id,
        metadata_type=metadata,
        text=text,
        offered=offered,
        launched=launched,
        terminal=terminal,
    )


def _execute_handler(context: DialogContext, catalog: Catalog, tags: set[str]):
    """Rule-based handling of the pending user intent for the execute action."""
    state = context.state
    intent = state.user_intent
    bindings: dict = {}
    offered: list[OfferItem] = []
    keep_prompt_text = False

    def focus_skill():
        sid = context.proposed_skill or context.requested_skill
        return catalog.skills[sid] if sid else None

    if intent is UserIntent.GET_RATING:
        skill = focus_skill()
        if skill is None:
            tags.add("no-focus")
        else:
            tags.add("rating")
            bindings = {"skill": skill.name, "rating": skill.rating, "reviews": skill.review_count}
    elif intent is UserIntent.GET_DETAILS:
        skill = focus_skill()
        if skill is None:
            tags.add("no-focus")
        else:
            tags.add("details")
            bindings = {"skill": skill.name, "description": skill.short_description}
    elif intent is UserIntent.HELP:
        tags.add("help")
    elif intent is UserIntent.REPEAT:
        tags.add("repeat")
        bindings = {"previous": context.last_prompt_text}
        keep_prompt_text = True
    elif intent is UserIntent.LIST_OPTIONS:
        if context.offered_items:
            tags.add("list-options")
            bindings = {"options": _join_labels(_offer_labels(catalog, context.offered_items))}
        else:
            tags.add("no-focus")
    elif intent is UserIntent.GO_BACK:
        context.state.target_category = context.category_stack.pop() if context.category_stack else None
        cats = _category_pool(context, catalog, 3)
        if cats:
            tags.add("go-back")
            for cat in cats:
                context.exhausted_categories.add(cat.id)
            offered = [OfferItem("category", c.id) for c in cats]
            bindings = {"categories": _join_labels([_category_label(catalog, c.id) for c in cats])}
            context.offered_items = offered
            context.proposed_skill = None
            context.selection_was_skill = False
        else:
            tags.add("exhausted")
    elif intent is UserIntent.OUT_OF_DOMAIN:
        if context.misunderstanding_count <= 1:
            tags.add("misunderstood-first")
            bindings = {"previous": context.last_prompt_text}
            keep_prompt_text = True
        else:
            tags.add("misunderstood-second")
    else:
        raise MaskViolation(f"execute cannot handle pending intent {intent.value}")
    return tags, bindings, offered, keep_prompt_text


def observe_user(
    context: DialogContext,
    intent: UserIntent,
    slot: str | int | None = None,
    catalog: Catalog | None = None,
) -> tuple[DialogContext, float, bool]:
    """Fold one user turn into the context; returns terminal reward when the
    user ends the dialog or the turn cap forces an end."""
    if context.done:
        raise DialogError("episode already terminal")
    if intent in SLOTTED_INTENTS and slot is None:
        raise DialogError(f"intent {intent.value} requires a slot")

    state = context.state
    state.turn_depth = min(state.turn_depth + 1, TURN_DEPTH_CAP)
    state.user_intent = intent
    context.selection_was_skill = False

    if intent is UserIntent.OUT_OF_DOMAIN:
        context.misunderstanding_count += 1
    else:
        context.misunderstanding_count = 0

    if intent is UserIntent.CATEGORY_NAME:
        if catalog is not None and slot not in catalog.categories:
            raise DialogError(f"category slot {slot!r} does not resolve")
        _select_category(context, str(slot))
    elif intent is UserIntent.SKILL_NAME:
        if catalog is not None and slot not in catalog.skills:
            raise DialogError(f"skill slot {slot!r} does not resolve")
        context.requested_skill = str(slot)
        context.has_selected = True
    elif intent is UserIntent.SELECT_OPTION:
        _select_option(context, slot)
    elif intent in (UserIntent.NO, UserIntent.OTHER_SKILL, UserIntent.OTHER_CATEGORY):
        # Patience tracks turned-down skill proposals; browsing more categories
        # does not wear the user out the same way.
        if any(it.kind == "skill" for it in context.offered_items):
            context.rejected_offers += 1

    reward, done = 0.0, False
    if intent in (UserIntent.STOP, UserIntent.END):
        reward, done = -1.0, True
    elif state.turn_depth >= TURN_DEPTH_CAP:
        reward, done = -1.0, True
    context.done = done
    return context, reward, done


def _select_category(context: DialogContext, category_id: str) -> None:
    state = context.state
    if state.target_category != category_id:
        context.category_stack.append(state.target_category)
        state.target_category = category_id
    context.exhausted_categories.add(category_id)
    context.has_selected = True


def _select_option(context: DialogContext, slot) -> None:
    try:
        index = int(slot)
    except (TypeError, ValueError):
        raise DialogError(f"select-option slot must be a 1-based index, got {slot!r}")
    if not context.offered_items or not 1 <= index <= len(context.offered_items):
        raise DialogError(f"select-option index {index} does not resolve against the last offer")
    item = context.offered_items[index - 1]
    if item.kind == "skill":
        context.proposed_skill = item.id
        context.selection_was_skill = True
    else:
        _select_category(context, item.id)
    context.has_selected = True


@dataclass
class StepResult:
    move: AgentMove
    next_state: DialogState
    reward: float
    done: bool


def step(
    context: DialogContext,
    action: AgentAction,
    user,
    catalog: Catalog,
    prompts: PromptCatalog,
    rng: np.random.Generator,
) -> StepResult:
    """One MDP step: agent acts, then (unless terminal) the user replies.

    The episode log gains one row per user turn: each row pairs the turn with
    the agent's response to it. A dialog the user ends (or the turn cap ends)
    closes with a synthetic end-session row carrying the -1 so that per-episode
    record rewards always sum to the episode return.
    """
    pre_intent = context.state.user_intent
    pre_depth = context.state.turn_depth
    pre_utterance = context.pending_utterance

    move = apply_action(context, action, catalog, prompts, rng)
    if move.terminal:
        reward = 1.0 if action is AgentAction.LAUNCH_SKILL else -1.0
        done = True
        context.episode_log.append(
            TurnRecord(pre_depth, pre_utterance, pre_intent, action,
                       move.prompt_id, move.metadata_type, reward)
        )
    else:
        intent, slot, utterance = user.respond(context, move)
        context.pending_utterance = utterance
        _, reward, done = observe_user(context, intent, slot, catalog)
        context.episode_log.append(
            TurnRecord(pre_depth, pre_utterance, pre_intent, action,
                       move.prompt_id, move.metadata_type, 0.0)
        )
        if done:
            context.episode_log.append(
                TurnRecord(context.state.turn_depth, utterance, intent,
                           AgentAction.END_SESSION, "", MetadataType.NO_METADATA, reward)
            )
    return StepResult(move=move, next_state=context.state.copy(), reward=reward, done=done)


def rule_policy(context: DialogContext, catalog: Catalog, rng: np.random.Generator) -> AgentAction:
    """The hand-authored baseline policy.

    Info requests go to execute; accepted proposals launch; repeated
    misunderstandings escalate repeat -> rephrase -> end; otherwise pick
    uniformly among the valid offer actions.
    """
    if context.done:
        raise DialogError("episode already terminal")
    state = context.state
    mask = action_mask(context, catalog)

    if state.user_intent is UserIntent.OUT_OF_DOMAIN:
        if context.misunderstanding_count >= 3:
            return AgentAction.END_SESSION
        return AgentAction.EXECUTE
    if state.user_intent in EXECUTE_INTENTS:
        return AgentAction.EXECUTE
    if mask[ACTION_INDEX[AgentAction.LAUNCH_SKILL]]:
        return AgentAction.LAUNCH_SKILL
    valid_offers = [
        a
        for a in ACTION_ORDER
        if (a in SKILL_OFFER_ACTIONS or a in CATEGORY_OFFER_ACTIONS) and mask[ACTION_INDEX[a]]
    ]
    if valid_offers:
        return valid_offers[int(rng.integers(0, len(valid_offers)))]
    return AgentAction.END_SESSION


class DialogEnv:
    """Convenience bundle of catalog + prompts + rng for episode rollouts."""

    def __init__(self, catalog: Catalog, prompts: PromptCatalog, rng: np.random.Generator):
        self.catalog = catalog
        self.prompts = prompts
        self.rng = rng
        self.context: DialogContext | None = None

    def reset(self, profile) -> DialogContext:
        self.context = reset(self.catalog, profile, self.rng)
        return self.context

    def mask(self) -> np.ndarray:
        return action_mask(self.context, self.catalog)

    def step(self, action: AgentAction, user) -> StepResult:
        return step(self.context, action, user, self.catalog, self.prompts, self.rng)
