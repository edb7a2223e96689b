from skillscout.usersim.profile import UserProfile, sample_profile
from skillscout.usersim.utterances import UtteranceBank, load_utterance_bank, sample_utterance
from skillscout.usersim.behavioral import BehavioralUser, behavioral_intent
from skillscout.usersim.dataset import (
    END_OF_DIALOG,
    EpisodeLog,
    IntentContext,
    IntentDataset,
    extract_sequences,
)
from skillscout.usersim.model import (
    IntentModel,
    load_intent_model,
    sample_intent,
    save_intent_model,
    train_intent_model,
)
from skillscout.usersim.simulated import IntentModelUser

__all__ = [
    "BehavioralUser",
    "END_OF_DIALOG",
    "EpisodeLog",
    "IntentContext",
    "IntentDataset",
    "IntentModel",
    "IntentModelUser",
    "UserProfile",
    "UtteranceBank",
    "behavioral_intent",
    "extract_sequences",
    "load_intent_model",
    "load_utterance_bank",
    "sample_intent",
    "sample_profile",
    "sample_utterance",
    "save_intent_model",
    "train_intent_model",
]
