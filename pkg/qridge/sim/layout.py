"""
Named qubit registers and the basis ordering shared by every simulated state.

Ordering is register-major: the basis index is the concatenation of the
per-register bitstrings in declared order, most-significant bit first inside
each register.
"""
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

from qridge.utils.error_recovery import LayoutError

DEFAULT_QUBIT_BUDGET = 24


@dataclass(frozen=True)
class Register:
    name: str
    width: int

    def __post_init__(self):
        if not self.name:
            raise LayoutError("register name must be non-empty")
        if self.width < 1:
            raise LayoutError(f"register '{self.name}' must have at least one qubit")

    @property
    def dimension(self) -> int:
        return 1 << self.width


@dataclass(frozen=True)
class QubitRegisterLayout:
    registers: Tuple[Register, ...]
    max_qubits: int = DEFAULT_QUBIT_BUDGET

    def __post_init__(self):
        names = [r.name for r in self.registers]
        if len(set(names)) != len(names):
            raise LayoutError(f"register names must be unique, got {names}")
        if self.num_qubits > self.max_qubits:
            raise LayoutError(
                f"layout needs {self.num_qubits} qubits, budget is {self.max_qubits}"
            )

    @classmethod
    def of(
        cls, *specs: Tuple[str, int], max_qubits: int = DEFAULT_QUBIT_BUDGET
    ) -> "QubitRegisterLayout":
        """Build a layout from (name, width) pairs."""
        return cls(tuple(Register(name, width) for name, width in specs), max_qubits)

    @property
    def names(self) -> List[str]:
        return [r.name for r in self.registers]

    @property
    def num_qubits(self) -> int:
        return sum(r.width for r in self.registers)

    @property
    def dimension(self) -> int:
        return 1 << self.num_qubits

    def __contains__(self, name: str) -> bool:
        return any(r.name == name for r in self.registers)

    def register(self, name: str) -> Register:
        for r in self.registers:
            if r.name == name:
                return r
        raise LayoutError(f"unknown register '{name}' (layout has {self.names})")

    def width(self, name: str) -> int:
        return self.register(name).width

    def offsets(self) -> Dict[str, int]:
        """First qubit axis of each register."""
        out: Dict[str, int] = {}
        position = 0
        for r in self.registers:
            out[r.name] = position
            position += r.width
        return out

    def axes(self, names: Iterable[str]) -> List[int]:
        """Qubit axes (MSB first) covered by the named registers, in the order given."""
        offsets = self.offsets()
        axes: List[int] = []
        for name in names:
            width = self.width(name)
            axes.extend(range(offsets[name], offsets[name] + width))
        return axes

    def qubit_axis(self, name: str, bit: int) -> int:
        """Axis of qubit `bit` of a register, bit 0 being its most-significant qubit."""
        width = self.width(name)
        if not 0 <= bit < width:
            raise LayoutError(f"register '{name}' has no qubit {bit}")
        return self.offsets()[name] + bit

    def concat(self, other: "QubitRegisterLayout") -> "QubitRegisterLayout":
        clash = set(self.names) & set(other.names)
        if clash:
            raise LayoutError(f"register name collision: {sorted(clash)}")
        budget = max(self.max_qubits, other.max_qubits)
        return QubitRegisterLayout(self.registers + other.registers, budget)

    def without(self, name: str) -> "QubitRegisterLayout":
        self.register(name)
        kept = tuple(r for r in self.registers if r.name != name)
        return QubitRegisterLayout(kept, self.max_qubits)

    def renamed(self, names: Sequence[str]) -> "QubitRegisterLayout":
        if len(names) != len(self.registers):
            raise LayoutError(f"expected {len(self.registers)} names, got {len(names)}")
        return QubitRegisterLayout(
            tuple(Register(new, r.width) for new, r in zip(names, self.registers)),
            self.max_qubits,
        )

    def same_shape(self, other: "QubitRegisterLayout") -> bool:
        return [r.width for r in self.registers] == [r.width for r in other.registers]

    def describe(self) -> str:
        return ", ".join(f"{r.name}:{r.width}" for r in self.registers)
