"""Validated experiment configuration built from CLI flags and config files."""

from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.utils.config import SchemeSettings

Subcommand = Literal["matrices", "burgers-bc", "converge", "ffs", "check"]
LawName = Literal["burgers", "euler"]

# Conservation law each simulating subcommand runs.
SUBCOMMAND_LAWS: dict[str, LawName] = {
    "burgers-bc": "burgers",
    "converge": "burgers",
    "ffs": "euler",
}

# Section of the INI config file holding each RunConfig field.
CONFIG_SECTIONS: dict[str, tuple[str, ...]] = {
    "run": ("subcommand", "law", "n", "jobs"),
    "scheme": ("p", "q", "alpha", "alpha_const", "jump_c", "dissipative"),
    "time": ("cfl", "t_end"),
    "output": ("out", "svg", "table_format", "latex"),
}


class RunConfig(BaseModel):
    """One experiment invocation.

    Unset numeric fields (None) take the subcommand's documented default.

    Attributes:
        subcommand: Experiment to run.
        p: Half-order of the interior flux.
        q: Boundary order; None means 2p-1.
        n: Grid size, or a sweep of sizes for converge.
        cfl: CFL number.
        t_end: Final time.
        law: Conservation law name; filled in from the subcommand when unset
            and rejected when the subcommand runs a different law.
        alpha: Dissipation steering, constant weight or jump sensor.
        alpha_const: Weight of the constant provider.
        jump_c: Jump sensor gain.
        dissipative: Add the dissipative flux at the (0,1) entry.
        out: Output directory.
        svg: Render SVG plots.
        table_format: Tabular format.
        latex: Also write LaTeX matrices.
        jobs: Parallel runs in a sweep.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    subcommand: Subcommand
    p: int | None = Field(None, ge=1, le=8)
    q: int | None = Field(None, ge=1)
    n: tuple[int, ...] = ()
    cfl: float | None = Field(None, gt=0.0, le=2.0)
    t_end: float | None = Field(None, ge=0.0)
    law: LawName | None = None
    alpha: Literal["constant", "jump"] | None = None
    alpha_const: float = Field(0.0, ge=0.0, le=1.0)
    jump_c: float = Field(1.0, gt=0.0)
    dissipative: bool = False
    out: Path | None = None
    svg: bool = False
    table_format: Literal["csv", "parquet"] | None = None
    latex: bool = True
    jobs: int = Field(1, ge=1)

    @model_validator(mode="before")
    @classmethod
    def default_law(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("law") is None:
            return {**data, "law": SUBCOMMAND_LAWS.get(data.get("subcommand", ""))}
        return data

    @field_validator("n", mode="before")
    @classmethod
    def parse_sizes(cls, v: Any) -> tuple[int, ...]:
        """Accept a single size, a sequence, or a comma-separated string."""
        if v is None:
            return ()
        if isinstance(v, str):
            return tuple(int(part) for part in v.replace(",", " ").split())
        if isinstance(v, int):
            return (v,)
        return tuple(v)

    @field_validator("n")
    @classmethod
    def validate_sizes(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if any(size < 1 for size in v):
            raise ValueError(f"grid sizes must be positive, got {v}")
        return v

    @model_validator(mode="after")
    def validate_orders(self) -> "RunConfig":
        """q must not exceed 2p-1."""
        if self.q is not None and self.p is not None and self.q > 2 * self.p - 1:
            raise ValueError(f"q={self.q} exceeds 2p-1={2 * self.p - 1}")
        return self

    @model_validator(mode="after")
    def validate_law(self) -> "RunConfig":
        """Simulating subcommands run one law each."""
        required = SUBCOMMAND_LAWS.get(self.subcommand)
        if required is not None and self.law != required:
            raise ValueError(f"{self.subcommand} runs the {required} law, not {self.law}")
        return self

    def resolved_p(self, default: int) -> int:
        return self.p if self.p is not None else default

    def scheme_settings(
        self, default_p: int, default_alpha: str = "constant", gamma: float = 1.4
    ) -> SchemeSettings:
        """Scheme section for this run; unset p and alpha take the given defaults."""
        return SchemeSettings(
            p=self.resolved_p(default_p),
            q=self.q,
            gamma=gamma,
            alpha_kind=self.alpha or default_alpha,
            alpha_const=self.alpha_const,
            jump_c=self.jump_c,
        )

    def to_sections(self) -> dict[str, dict[str, str]]:
        """Flat string sections, the layout of config files and manifests."""
        data = self.model_dump(mode="json")
        sections: dict[str, dict[str, str]] = {}
        for section, keys in CONFIG_SECTIONS.items():
            values = {}
            for key in keys:
                value = data[key]
                if value is None:
                    continue
                if isinstance(value, list):
                    value = ",".join(str(x) for x in value)
                values[key] = str(value).lower() if isinstance(value, bool) else str(value)
            sections[section] = values
        return sections
