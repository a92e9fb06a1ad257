"""Machine-readable outcomes of checks, probes, and instance validations."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class DivergenceReport:
    system: str
    fuel: int
    steps: int
    exhausted: bool
    term_size: int

    def __post_init__(self):
        if self.exhausted:
            assert self.steps == self.fuel


@dataclass(frozen=True)
class CheckedItem:
    name: str
    type_text: str
    verdict: str  # "ok" | "type-error"
    detail: str = ""


@dataclass
class InstanceReport:
    instance: str
    host: str
    entries_validated: list[CheckedItem] = field(default_factory=list)
    theorems: list[CheckedItem] = field(default_factory=list)
    notes: str = ""

    def ok(self) -> bool:
        return all(i.verdict == "ok" for i in self.entries_validated + self.theorems)

    def add_entry(self, name: str, verdict: str = "ok", detail: str = "", type_text: str = "") -> None:
        self.entries_validated.append(CheckedItem(name, type_text, verdict, detail))

    def add_theorem(self, name: str, type_text: str = "", verdict: str = "ok", detail: str = "") -> None:
        self.theorems.append(CheckedItem(name, type_text, verdict, detail))
