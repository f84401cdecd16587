"""Policy selection: variant tag plus parameters, and the CLI name syntax.

Names look like ``first_fit``, ``departure:tau=10``, ``random_fit:seed=7`` or
``direct_sum:inner=departure,tau=5``. Parameters left out are resolved
against the instance at run time (see :func:`resolve`).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from ..core import Instance

ANYFIT = ("first_fit", "last_fit", "best_fit", "worst_fit", "random_fit", "mtf", "greedy")
MONOTONE = ("first_fit", "last_fit", "mtf", "greedy")
THRESHOLDED = {"modified_next_fit": "next_fit", "modified_first_fit": "first_fit"}
CLASSED = ("departure_strategy", "duration_strategy", "hybrid")
CLAIRVOYANT = ("greedy",) + CLASSED
BASE_VARIANTS = ("next_fit",) + ANYFIT + tuple(THRESHOLDED) + CLASSED

# external name -> internal variant
ALIASES = {
    "mnf": "modified_next_fit",
    "mff": "modified_first_fit",
    "departure": "departure_strategy",
    "duration": "duration_strategy",
}
_SHORT = {v: k for k, v in ALIASES.items()}

_PARAMS = {
    "modified_next_fit": {"threshold"},
    "modified_first_fit": {"threshold"},
    "random_fit": {"seed"},
    "departure_strategy": {"tau"},
    "duration_strategy": {"b", "alpha"},
    "hybrid": {"mu"},
}


class PolicyError(ValueError):
    """Unknown policy name or invalid parameter."""


@dataclass(frozen=True)
class PolicySpec:
    variant: str
    threshold: int | None = None
    seed: int = 0
    tau: int | None = None
    b: int = 1
    alpha: int = 2
    mu: int | None = None
    inner: PolicySpec | None = None

    def __post_init__(self):
        if self.variant == "direct_sum":
            if self.inner is None:
                raise PolicyError("direct_sum needs an inner policy")
            if self.inner.variant == "direct_sum":
                raise PolicyError("direct_sum cannot be nested")
        elif self.variant not in BASE_VARIANTS:
            raise PolicyError(f"unknown policy variant {self.variant!r}")
        if self.threshold is not None and self.threshold < 1:
            raise PolicyError("threshold must be positive")
        if self.tau is not None and self.tau < 1:
            raise PolicyError("tau must be >= 1")
        if self.b < 1:
            raise PolicyError("b must be >= 1")
        if self.alpha < 2:
            raise PolicyError("alpha must be >= 2")
        if self.mu is not None and self.mu < 1:
            raise PolicyError("mu must be >= 1")

    @property
    def clairvoyant(self) -> bool:
        if self.variant == "direct_sum":
            return self.inner.clairvoyant
        return self.variant in CLAIRVOYANT

    @property
    def is_anyfit(self) -> bool:
        return self.variant in ANYFIT

    @property
    def is_monotone(self) -> bool:
        return self.variant in MONOTONE

    @property
    def name(self) -> str:
        if self.variant == "direct_sum":
            if self.inner == PolicySpec("hybrid", mu=self.inner.mu) and self.inner.mu is None:
                return "new_hybrid"
            inner = self.inner.name.replace(":", ",")
            return f"direct_sum:inner={inner}"
        base = _SHORT.get(self.variant, self.variant)
        params = []
        for key in sorted(_PARAMS.get(self.variant, ())):
            value = getattr(self, key)
            default = getattr(PolicySpec, key, None)
            if value is not None and value != default:
                params.append(f"{key}={value}")
        return base + (":" + ",".join(params) if params else "")

    def __str__(self) -> str:
        return self.name


def parse_policy(text: str) -> PolicySpec:
    text = text.strip()
    head, _, rest = text.partition(":")
    head = head.strip()
    params: dict[str, str] = {}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, eq, value = item.partition("=")
        if not eq:
            raise PolicyError(f"malformed parameter {item!r} in {text!r}")
        params[key.strip()] = value.strip()

    if head == "new_hybrid":
        if params:
            raise PolicyError("new_hybrid takes no parameters; use direct_sum:inner=hybrid,...")
        return PolicySpec("direct_sum", inner=PolicySpec("hybrid"))
    if head == "direct_sum":
        inner = params.pop("inner", None)
        if inner is None:
            raise PolicyError("direct_sum needs inner=<policy>")
        tail = ",".join(f"{k}={v}" for k, v in params.items())
        return PolicySpec("direct_sum", inner=parse_policy(inner + (":" + tail if tail else "")))

    variant = ALIASES.get(head, head)
    if variant not in BASE_VARIANTS:
        raise PolicyError(f"unknown policy {head!r}")
    allowed = _PARAMS.get(variant, set())
    kwargs = {}
    for key, value in params.items():
        if key not in allowed:
            raise PolicyError(f"policy {head!r} has no parameter {key!r}")
        try:
            kwargs[key] = int(value)
        except ValueError:
            raise PolicyError(f"parameter {key}={value!r} is not an integer") from None
    return PolicySpec(variant, **kwargs)


def resolve(spec: PolicySpec, inst: Instance) -> PolicySpec:
    """Fill instance-dependent defaults.

    Thresholds default to D // (mu + 1) for modified_next_fit and
    D // (mu + 7) for modified_first_fit (at least 1), read per dimension;
    tau defaults to mu and hybrid's mu to the instance's mu.
    """
    if spec.variant == "direct_sum":
        return replace(spec, inner=resolve(spec.inner, inst))
    D, mu = inst.denominator, inst.mu
    if spec.variant == "modified_next_fit" and spec.threshold is None:
        return replace(spec, threshold=max(1, D // (mu + 1)))
    if spec.variant == "modified_first_fit" and spec.threshold is None:
        return replace(spec, threshold=max(1, D // (mu + 7)))
    if spec.variant in THRESHOLDED and spec.threshold > D:
        raise PolicyError(f"threshold {spec.threshold} exceeds capacity {D}")
    if spec.variant == "departure_strategy" and spec.tau is None:
        return replace(spec, tau=mu)
    if spec.variant == "hybrid" and spec.mu is None:
        return replace(spec, mu=mu)
    return spec
