from dataclasses import dataclass, field


@dataclass
class CheckResult:
    """Outcome of a verification step.

    ``witness`` names the first offending basis indices (or vectors) when the
    check fails; ``values`` carries the exact quantities that were compared.
    """

    passed: bool
    witness: object = None
    values: dict = field(default_factory=dict)
    detail: str = ""

    def __bool__(self):
        return self.passed
