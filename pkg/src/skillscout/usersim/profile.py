"""User personas: the attributes that shape simulated behavior."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from skillscout.catalog import Catalog


@dataclass(frozen=True)
class UserProfile:
    first_time: bool = True
    style: str = "brief"  # "brief" or "verbose"
    patience: int = 3
    preferred_categories: tuple[str, ...] = ()
    accept_probability: float = 0.7

    def __post_init__(self):
        if self.style not in ("brief", "verbose"):
            raise ValueError(f"unknown style {self.style!r}")
        if self.patience < 1:
            raise ValueError("patience must be >= 1")
        if not 0.0 <= self.accept_probability <= 1.0:
            raise ValueError("accept_probability must be in [0, 1]")


# Share of first-time users in sampled populations, mirroring the production
# traffic split the policies were exposed to.
FIRST_TIME_SHARE = 0.6
VERBOSE_SHARE = 0.4


def sample_profile(catalog: Catalog, rng: np.random.Generator,
                   first_time_share: float = FIRST_TIME_SHARE) -> UserProfile:
    """Draw a persona: seeded category preferences, style, and patience."""
    roots = list(catalog.root_category_ids)
    n_pref = int(rng.integers(1, min(3, len(roots)) + 1)) if roots else 0
    preferred = tuple(
        rng.choice(roots, size=n_pref, replace=False).tolist()
    ) if n_pref else ()
    return UserProfile(
        first_time=bool(rng.random() < first_time_share),
        style="verbose" if rng.random() < VERBOSE_SHARE else "brief",
        patience=int(rng.integers(1, 4)),
        preferred_categories=preferred,
        accept_probability=float(np.clip(rng.normal(0.75, 0.1), 0.3, 1.0)),
    )
