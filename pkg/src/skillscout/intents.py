"""The discrete vocabularies of the dialog: user intents, agent actions, metadata types."""

from __future__ import annotations

from enum import Enum


class UserIntent(str, Enum):
    START = "start"
    CATEGORY_NAME = "category-name"
    SKILL_NAME = "skill-name"
    SELECT_OPTION = "select-option"
    YES = "yes"
    NO = "no"
    OTHER_CATEGORY = "other-category"
    OTHER_SKILL = "other-skill"
    GET_RATING = "get-rating"
    GET_DETAILS = "get-details"
    HELP = "help"
    REPEAT = "repeat"
    LIST_OPTIONS = "list-options"
    GO_BACK = "go-back"
    STOP = "stop"
    END = "end"
    OUT_OF_DOMAIN = "out-of-domain"


# Intents that carry a slot: a category id, a skill id, or a 1-based ordinal.
SLOTTED_INTENTS = frozenset(
    {UserIntent.CATEGORY_NAME, UserIntent.SKILL_NAME, UserIntent.SELECT_OPTION}
)

# Intents the execute action handles (info requests, navigation, misunderstandings).
EXECUTE_INTENTS = frozenset(
    {
        UserIntent.GET_RATING,
        UserIntent.GET_DETAILS,
        UserIntent.REPEAT,
        UserIntent.LIST_OPTIONS,
        UserIntent.HELP,
        UserIntent.GO_BACK,
        UserIntent.OUT_OF_DOMAIN,
    }
)

TERMINAL_INTENTS = frozenset({UserIntent.STOP, UserIntent.END})


class AgentAction(str, Enum):
    OFFER_ONE_SKILL = "offer-one-skill"
    OFFER_ONE_SKILL_OR_CATEGORY = "offer-one-skill-or-category"
    OFFER_ONE_CATEGORY = "offer-one-category"
    OFFER_THREE_CATEGORIES = "offer-three-categories"
    OFFER_FIVE_CATEGORIES = "offer-five-categories"
    LAUNCH_SKILL = "launch-skill"
    END_SESSION = "end-session"
    EXECUTE = "execute"


SKILL_OFFER_ACTIONS = frozenset(
    {AgentAction.OFFER_ONE_SKILL, AgentAction.OFFER_ONE_SKILL_OR_CATEGORY}
)
CATEGORY_OFFER_ACTIONS = frozenset(
    {
        AgentAction.OFFER_ONE_CATEGORY,
        AgentAction.OFFER_THREE_CATEGORIES,
        AgentAction.OFFER_FIVE_CATEGORIES,
    }
)
OFFER_ACTIONS = SKILL_OFFER_ACTIONS | CATEGORY_OFFER_ACTIONS

CATEGORY_OFFER_K = {
    AgentAction.OFFER_ONE_CATEGORY: 1,
    AgentAction.OFFER_THREE_CATEGORIES: 3,
    AgentAction.OFFER_FIVE_CATEGORIES: 5,
}


class MetadataType(str, Enum):
    NO_METADATA = "no-metadata"
    SHORT_DESCRIPTION = "short-description"
    TRENDING = "trending"
    RECOMMENDED = "recommended"
    RATING_REVIEW = "rating-review"


INTENT_ORDER: tuple[UserIntent, ...] = tuple(UserIntent)
ACTION_ORDER: tuple[AgentAction, ...] = tuple(AgentAction)
METADATA_ORDER: tuple[MetadataType, ...] = tuple(MetadataType)

INTENT_INDEX = {intent: i for i, intent in enumerate(INTENT_ORDER)}
ACTION_INDEX = {action: i for i, action in enumerate(ACTION_ORDER)}
METADATA_INDEX = {md: i for i, md in enumerate(METADATA_ORDER)}

N_INTENTS = len(INTENT_ORDER)
N_ACTIONS = len(ACTION_ORDER)
N_METADATA = len(METADATA_ORDER)
