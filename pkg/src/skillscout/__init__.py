"""SkillScout: conversational skill discovery with rule-based and learned dialog policies."""

__version__ = "0.1.0"
