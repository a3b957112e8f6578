"""Exact state-vector simulation over named qubit registers.

Basis-state indices are little-endian over the composite register: qubit k
(1-based) of a register at offset o occupies bit (o + k - 1) of the index,
so a register's first qubit is its least significant bit and lines up with
the leftmost character of a pattern string.

Two storage modes exist. Sparse mode (default) maps basis index to complex
amplitude in a dict and drops entries whose magnitude falls below
PRUNE_THRESHOLD after amplitude-mixing operations. Dense mode keeps the
full 2**total_qubits vector and is retained for cross-validation; both
modes implement every operation and agree amplitude-by-amplitude.

All operations return new StateVector values; existing values are never
mutated, so sharing across threads is safe. Randomized operations take a
seedable numpy Generator (np.random.default_rng); outcomes are
deterministic given the seed and configuration.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from .errors import DimensionError

PRUNE_THRESHOLD = 1e-14
NORM_TOLERANCE = 1e-10
_MAX_DENSE_QUBITS = 24

_SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True)
class Register:
    """A named contiguous block of qubits inside the composite index."""

    name: str
    width: int
    offset: int

    @property
    def mask(self) -> int:
        return ((1 << self.width) - 1) << self.offset

    def bits(self) -> range:
        """Global bit indices occupied by this register."""
        return range(self.offset, self.offset + self.width)

    def bit(self, k: int) -> int:
        """Global bit index of qubit k (1-based) of this register."""
        if not 1 <= k <= self.width:
            raise IndexError(f"register {self.name!r} has no qubit {k}")
        return self.offset + k - 1

    def encode(self, bits: Sequence[int]) -> int:
        """Pack register-local bits (first qubit first) into an index value."""
        if len(bits) != self.width:
            raise DimensionError(
                f"register {self.name!r} holds {self.width} qubits, got {len(bits)} bits"
            )
        value = 0
        for j, b in enumerate(bits):
            if b:
                value |= 1 << (self.offset + j)
        return value

    def decode(self, index: int) -> tuple[int, ...]:
        """Extract this register's bits (first qubit first) from a basis index."""
        return tuple((index >> (self.offset + j)) & 1 for j in range(self.width))


class RegisterLayout:
    """Named, disjoint registers covering all simulated qubits, in index order."""

    def __init__(self, widths: Sequence[tuple[str, int]]):
        offset = 0
        registers = []
        seen: set[str] = set()
        for name, width in widths:
            if width < 1:
                raise ValueError(f"register {name!r} must hold at least one qubit")
            if name in seen:
                raise ValueError(f"duplicate register name {name!r}")
            seen.add(name)
            registers.append(Register(name, width, offset))
            offset += width
        self.registers: tuple[Register, ...] = tuple(registers)
        self.total_qubits: int = offset

    @classmethod
    def retrieval(cls, n: int, b: int) -> RegisterLayout:
        """Memory (n), control (b), and ancilla registers for retrieval runs.

        The input register stays classical and is not simulated; gates
        conditioned on input qubits become classically conditioned gates.
        """
        return cls((("memory", n), ("control", b), ("ancilla", 1)))

    @classmethod
    def cloning(cls, n: int) -> RegisterLayout:
        """Memory (n), copy (n), and ancilla registers for the cloning map."""
        return cls((("memory", n), ("copy", n), ("ancilla", 1)))

    @classmethod
    def memory_only(cls, n: int) -> RegisterLayout:
        return cls((("memory", n),))

    @property
    def dim(self) -> int:
        return 1 << self.total_qubits

    def register(self, name: str) -> Register:
        for reg in self.registers:
            if reg.name == name:
                return reg
        raise ValueError(f"layout has no register {name!r}")

    def __contains__(self, name: str) -> bool:
        return any(reg.name == name for reg in self.registers)

    @property
    def memory(self) -> Register:
        return self.register("memory")

    @property
    def control(self) -> Register:
        return self.register("control")

    @property
    def ancilla(self) -> Register:
        return self.register("ancilla")

    @property
    def n(self) -> int:
        return self.memory.width

    @property
    def b(self) -> int:
        return self.control.width if "control" in self else 0

    def __eq__(self, other) -> bool:
        return isinstance(other, RegisterLayout) and self.registers == other.registers

    def __hash__(self) -> int:
        return hash(self.registers)

    def __repr__(self) -> str:
        body = ", ".join(f"{r.name}:{r.width}" for r in self.registers)
        return f"RegisterLayout({body})"


class StateVector:
    """Normalized complex amplitudes over a layout's basis states."""

    __slots__ = ("layout", "mode", "_amps")

    def __init__(self, layout, amps, mode, _internal=False):
        if not _internal:
            raise TypeError(
                "use StateVector.basis_state or StateVector.from_amplitudes"
            )
        self.layout = layout
        self.mode = mode
        self._amps = amps

    @classmethod
    def _sparse(cls, layout: RegisterLayout, amps: dict[int, complex]) -> StateVector:
        return cls(layout, amps, "sparse", _internal=True)

    @classmethod
    def _dense(cls, layout: RegisterLayout, amps: np.ndarray) -> StateVector:
        return cls(layout, amps, "dense", _internal=True)

    @classmethod
    def basis_state(
        cls, layout: RegisterLayout, index: int = 0, mode: str = "sparse"
    ) -> StateVector:
        if not 0 <= index < layout.dim:
            raise IndexError(f"basis index {index} out of range")
        return cls.from_amplitudes(layout, {index: 1.0 + 0j}, mode=mode)

    @classmethod
    def from_amplitudes(
        cls,
        layout: RegisterLayout,
        amplitudes: Mapping[int, complex],
        mode: str = "sparse",
    ) -> StateVector:
        """Build a state from a basis-index to amplitude mapping.

        The mapping must be normalized to within NORM_TOLERANCE; the
        constructor never renormalizes.
        """
        if mode not in ("sparse", "dense"):
            raise ValueError(f"unknown mode {mode!r}")
        norm_sq = 0.0
        for index, amp in amplitudes.items():
            if not 0 <= index < layout.dim:
                raise IndexError(f"basis index {index} out of range")
            norm_sq += abs(amp) ** 2
        if abs(norm_sq - 1.0) > NORM_TOLERANCE:
            raise ValueError(f"amplitudes are not normalized: |psi|^2 = {norm_sq!r}")
        if mode == "sparse":
            amps = {
                int(i): complex(a)
                for i, a in amplitudes.items()
                if abs(a) > PRUNE_THRESHOLD
            }
            return cls._sparse(layout, amps)
        _check_dense_size(layout)
        arr = np.zeros(layout.dim, dtype=np.complex128)
        for i, a in amplitudes.items():
            arr[i] = a
        return cls._dense(layout, arr)

    def amplitude(self, index: int) -> complex:
        if self.mode == "sparse":
            return self._amps.get(index, 0j)
        return complex(self._amps[index])

    def items(self) -> Iterator[tuple[int, complex]]:
        """Nonzero (basis index, amplitude) pairs."""
        if self.mode == "sparse":
            yield from self._amps.items()
        else:
            for i in np.nonzero(self._amps)[0]:
                yield int(i), complex(self._amps[i])

    @property
    def support_size(self) -> int:
        if self.mode == "sparse":
            return len(self._amps)
        return int(np.count_nonzero(self._amps))

    def norm(self) -> float:
        if self.mode == "sparse":
            return math.sqrt(sum(abs(a) ** 2 for a in self._amps.values()))
        return float(np.linalg.norm(self._amps))

    def to_mode(self, mode: str) -> StateVector:
        if mode == self.mode:
            return self
        if mode == "dense":
            _check_dense_size(self.layout)
            arr = np.zeros(self.layout.dim, dtype=np.complex128)
            for i, a in self._amps.items():
                arr[i] = a
            return StateVector._dense(self.layout, arr)
        if mode == "sparse":
            amps = {
                int(i): complex(self._amps[i])
                for i in np.nonzero(self._amps)[0]
                if abs(self._amps[i]) > PRUNE_THRESHOLD
            }
            return StateVector._sparse(self.layout, amps)
        raise ValueError(f"unknown mode {mode!r}")

    def as_dict(self) -> dict[int, complex]:
        return dict(self.items())

    def allclose(self, other: StateVector, tol: float = 1e-12) -> bool:
        """Amplitude-by-amplitude agreement over the union of supports."""
        if self.layout != other.layout:
            return False
        indices = {i for i, _ in self.items()} | {i for i, _ in other.items()}
        return all(
            abs(self.amplitude(i) - other.amplitude(i)) <= tol for i in indices
        )

    def __repr__(self) -> str:
        return (
            f"StateVector({self.layout!r}, mode={self.mode},"
            f" support={self.support_size})"
        )


def _check_dense_size(layout: RegisterLayout) -> None:
    if layout.total_qubits > _MAX_DENSE_QUBITS:
        raise ValueError(
            f"dense mode supports at most {_MAX_DENSE_QUBITS} qubits,"
            f" layout has {layout.total_qubits}"
        )


def _check_qubit(state: StateVector, qubit: int) -> None:
    if not 0 <= qubit < state.layout.total_qubits:
        raise IndexError(
            f"qubit {qubit} out of range for {state.layout.total_qubits}-qubit layout"
        )


def _prune(amps: dict[int, complex]) -> dict[int, complex]:
    return {i: a for i, a in amps.items() if abs(a) > PRUNE_THRESHOLD}


def apply_not(state: StateVector, qubit: int) -> StateVector:
    """Flip one qubit on every basis state (Pauli X)."""
    _check_qubit(state, qubit)
    mask = 1 << qubit
    if state.mode == "sparse":
        return StateVector._sparse(
            state.layout, {i ^ mask: a for i, a in state._amps.items()}
        )
    idx = np.arange(state.layout.dim) ^ mask
    return StateVector._dense(state.layout, state._amps[idx])


def apply_xor(state: StateVector, control: int, target: int) -> StateVector:
    """Flip the target qubit on basis states whose control qubit is 1."""
    _check_qubit(state, control)
    _check_qubit(state, target)
    if control == target:
        raise ValueError("control and target must be different qubits")
    cmask, tmask = 1 << control, 1 << target
    if state.mode == "sparse":
        return StateVector._sparse(
            state.layout,
            {(i ^ tmask if i & cmask else i): a for i, a in state._amps.items()},
        )
    idx = np.arange(state.layout.dim)
    perm = np.where((idx & cmask) != 0, idx ^ tmask, idx)
    return StateVector._dense(state.layout, state._amps[perm])


def apply_hadamard(state: StateVector, qubit: int) -> StateVector:
    """Apply the 2x2 Hadamard to one qubit."""
    _check_qubit(state, qubit)
    mask = 1 << qubit
    if state.mode == "sparse":
        new: dict[int, complex] = {}
        done: set[int] = set()
        amps = state._amps
        for i in amps:
            base = i & ~mask
            if base in done:
                continue
            done.add(base)
            a0 = amps.get(base, 0j)
            a1 = amps.get(base | mask, 0j)
            n0 = (a0 + a1) * _SQRT_HALF
            n1 = (a0 - a1) * _SQRT_HALF
            if abs(n0) > PRUNE_THRESHOLD:
                new[base] = n0
            if abs(n1) > PRUNE_THRESHOLD:
                new[base | mask] = n1
        return StateVector._sparse(state.layout, new)
    idx = np.arange(state.layout.dim)
    lower = idx[(idx & mask) == 0]
    upper = lower | mask
    out = np.empty_like(state._amps)
    a0, a1 = state._amps[lower], state._amps[upper]
    out[lower] = (a0 + a1) * _SQRT_HALF
    out[upper] = (a0 - a1) * _SQRT_HALF
    return StateVector._dense(state.layout, out)


def apply_hamming_phase(state: StateVector, control: int) -> StateVector:
    """Phase each basis state by exp(i * (pi/2n) * z * sigma).

    z counts the 0-bits of the memory register in that basis state and
    sigma is +1 when the given control qubit is 0, -1 when it is 1. This
    is the diagonal distance-counting step between the two Hadamards of a
    control rotation; diagonal operators on different controls commute.
    """
    layout = state.layout
    control_reg = layout.control
    if control not in control_reg.bits():
        raise ValueError(
            f"qubit {control} is not in the control register {list(control_reg.bits())}"
        )
    mem = layout.memory
    n = mem.width
    step = math.pi / (2 * n)
    cmask = 1 << control
    if state.mode == "sparse":
        new = {}
        for i, a in state._amps.items():
            z = n - (i & mem.mask).bit_count()
            sigma = -1.0 if i & cmask else 1.0
            new[i] = a * cmath.exp(1j * step * z * sigma)
        return StateVector._sparse(state.layout, new)
    idx = np.arange(layout.dim)
    zeros = np.full(layout.dim, n, dtype=np.int64)
    for b in mem.bits():
        zeros -= (idx >> b) & 1
    sigma = np.where((idx & cmask) != 0, -1.0, 1.0)
    phases = np.exp(1j * step * zeros * sigma)
    return StateVector._dense(state.layout, state._amps * phases)


def collapse_qubit(
    state: StateVector, qubit: int, outcome: int
) -> tuple[float, StateVector]:
    """Project one qubit onto an outcome and renormalize.

    Returns (outcome probability, collapsed state). Collapsing onto a
    zero-probability outcome is an error.
    """
    _check_qubit(state, qubit)
    if outcome not in (0, 1):
        raise ValueError("outcome must be 0 or 1")
    mask = 1 << qubit
    want = mask if outcome else 0
    return _project(state, mask, want)


def _project(
    state: StateVector, select_mask: int, select_value: int
) -> tuple[float, StateVector]:
    if state.mode == "sparse":
        kept = {
            i: a for i, a in state._amps.items() if (i & select_mask) == select_value
        }
        probability = sum(abs(a) ** 2 for a in kept.values())
        if probability <= 0.0:
            raise ValueError("projection onto a zero-probability subspace")
        scale = 1.0 / math.sqrt(probability)
        return probability, StateVector._sparse(
            state.layout, {i: a * scale for i, a in kept.items()}
        )
    idx = np.arange(state.layout.dim)
    keep = (idx & select_mask) == select_value
    probability = float(np.sum(np.abs(state._amps[keep]) ** 2))
    if probability <= 0.0:
        raise ValueError("projection onto a zero-probability subspace")
    out = np.where(keep, state._amps, 0j) / math.sqrt(probability)
    return probability, StateVector._dense(state.layout, out)


def measure_qubit(state: StateVector, qubit: int, rng) -> tuple[int, StateVector]:
    """Born-rule measurement of one qubit; returns (bit, collapsed state)."""
    _check_qubit(state, qubit)
    mask = 1 << qubit
    p_one = sum(abs(a) ** 2 for i, a in state.items() if i & mask)
    outcome = 1 if rng.random() < p_one else 0
    _, collapsed = collapse_qubit(state, qubit, outcome)
    return outcome, collapsed


def measure_register(
    state: StateVector, register: str | Register, rng
) -> tuple[str, StateVector]:
    """Born-rule measurement of a whole register.

    Returns (bit string, collapsed state); the string is written with the
    register's first qubit leftmost, matching the pattern convention.
    """
    reg = state.layout.register(register) if isinstance(register, str) else register
    masses: dict[int, float] = {}
    for i, a in state.items():
        value = (i & reg.mask) >> reg.offset
        masses[value] = masses.get(value, 0.0) + abs(a) ** 2
    values = sorted(masses)
    u = rng.random()
    acc = 0.0
    chosen = values[-1]
    for value in values:
        acc += masses[value]
        if u < acc:
            chosen = value
            break
    _, collapsed = _project(state, reg.mask, chosen << reg.offset)
    word = "".join(str((chosen >> j) & 1) for j in range(reg.width))
    return word, collapsed


def probability_of_subspace(
    state: StateVector, predicate: Callable[[int], bool]
) -> float:
    """Total Born probability of basis states satisfying the predicate."""
    return sum(abs(a) ** 2 for i, a in state.items() if predicate(i))


def reflect_about_state(state: StateVector, axis: StateVector) -> StateVector:
    """Reflection 2 <axis|state> axis - state; unitary when axis is normalized."""
    if state.layout != axis.layout:
        raise DimensionError("layout mismatch between state and reflection axis")
    axis = axis.to_mode(state.mode)
    coeff = 2.0 * inner_product(axis, state)
    if state.mode == "sparse":
        new = {i: -a for i, a in state._amps.items()}
        for i, a in axis._amps.items():
            new[i] = new.get(i, 0j) + coeff * a
        return StateVector._sparse(state.layout, _prune(new))
    return StateVector._dense(state.layout, coeff * axis._amps - state._amps)


def reflect_good_subspace(state: StateVector, branch: int) -> StateVector:
    """Negate amplitudes whose control register is all-0 (branch 0) or all-1 (branch 1)."""
    if branch not in (0, 1):
        raise ValueError("branch must be 0 or 1")
    reg = state.layout.control
    target = reg.mask if branch else 0
    if state.mode == "sparse":
        return StateVector._sparse(
            state.layout,
            {
                i: (-a if (i & reg.mask) == target else a)
                for i, a in state._amps.items()
            },
        )
    idx = np.arange(state.layout.dim)
    flip = (idx & reg.mask) == target
    return StateVector._dense(state.layout, np.where(flip, -state._amps, state._amps))


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b> with the first argument conjugated."""
    if a.layout != b.layout:
        raise DimensionError("layout mismatch in inner product")
    if a.mode == "dense" and b.mode == "dense":
        return complex(np.vdot(a._amps, b._amps))
    if a.mode == "sparse" and (b.mode == "dense" or len(a._amps) <= len(b._amps)):
        return sum(av.conjugate() * b.amplitude(i) for i, av in a._amps.items())
    return sum(a.amplitude(i).conjugate() * bv for i, bv in b._amps.items())
