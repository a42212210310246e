"""Convention choices shared by every computation, and the ledger recording them."""

from dataclasses import asdict, dataclass

METRICS = ("apolar", "monomial")
CONF_LIFTS = ("orthogonal", "product")
LABELS = ("calibrated", "inverse", "identity")


@dataclass(frozen=True)
class Conventions:
    """Which metric, configuration-side lift and component/flag bijection to use.

    ``labels="calibrated"`` pairs the configuration component labelled τ with
    the fixed flag τ⁻¹, the bijection produced by the numerical map.
    ``"inverse"`` is a deliberate alias for the same table, and ``"identity"``
    pairs τ with τ (kept so that the wrong choice can be shown to fail).
    """

    metric: str = "apolar"
    conf_lift: str = "orthogonal"
    labels: str = "calibrated"

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}")
        if self.conf_lift not in CONF_LIFTS:
            raise ValueError(f"conf_lift must be one of {CONF_LIFTS}")
        if self.labels not in LABELS:
            raise ValueError(f"labels must be one of {LABELS}")

    def key(self):
        return f"{self.metric}-{self.conf_lift}-{self.labels}"

    def ledger(self):
        return {
            **asdict(self),
            "variable": "t' with t = 2t'; u' = t'^2 and u = 4u'",
            "principal_weights": "mu_i = n + 1 - 2i",
            "epsilon": "+1 when x_i precedes x_j on the axis",
            "generator_sign": "omega_ji = -omega_ij",
            "component_label": "tau means x_tau(1) < ... < x_tau(n) on the axis",
            "flag_label": "w means line i has weight mu_w(i); t_i restricts to mu_w(i) t'",
            "group_action": "sigma sends component tau to sigma*tau and h(t) to h(t_sigma(1), ..., t_sigma(n))",
            "row_bijection": "tau -> tau^-1" if self.labels != "identity" else "tau -> tau",
            "k_theory_circle": "spin double cover; q is its character",
        }


DEFAULT = Conventions()
