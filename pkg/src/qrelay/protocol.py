"""Two-phase relay protocol: distribute a qubit across n parties, then
concentrate it back onto a single receiver.

Distribution: the sender holds the unknown qubit (register 1) and the
channel endpoint (register 2), measures the pair in the Bell basis, and
broadcasts the outcome; each party applies a local correction. The
surviving n-qubit register then encodes the input over the channel's
support structure.

Concentration: each party holds one qubit of the distributed state and one
qubit of a fresh receiver-side channel, measures its pair in the Bell
basis, and sends the outcome to the receiver, who applies one composite
correction. Branch enumeration is exhaustive (all outcome tuples with
their joint probabilities) or sampled (one trajectory drawn from them).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bell import (
    BELL_OUTCOMES,
    CORRECTION_FOR_OUTCOME,
    NULL_PROB_EPS,
    PAULI_MATRICES,
    BellOutcome,
    PauliLabel,
    _pair_rows,
    as_rng,
    pauli_product,
)
from .channels import ChannelSpec, Endpoint, Variant, build_channel_component
from .statevec import CapacityError, StateVector, _apply_1q, fidelity_pure, tensor

MAX_EXHAUSTIVE_PARTIES = 6

PROB_SANITY_ATOL = 1e-9


@dataclass(frozen=True)
class InputQubit:
    """The unknown single-qubit state alpha|0> + beta|1>."""

    alpha: complex
    beta: complex

    def __post_init__(self) -> None:
        norm_sq = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm_sq - 1.0) > 1e-10:
            raise ValueError(f"input amplitudes have |a|^2+|b|^2 = {norm_sq}, expected 1")

    def to_state(self) -> StateVector:
        return StateVector(1, np.array([self.alpha, self.beta], dtype=complex))


def random_input(rng) -> InputQubit:
    gen = as_rng(rng)
    vec = gen.normal(size=2) + 1j * gen.normal(size=2)
    vec /= np.linalg.norm(vec)
    return InputQubit(complex(vec[0]), complex(vec[1]))


class Measured(NamedTuple):
    party: str
    pair: tuple[int, int]
    outcome: BellOutcome


class Broadcast(NamedTuple):
    party: str
    recipients: tuple[str, ...]
    outcome: BellOutcome


class Corrected(NamedTuple):
    party: str
    pauli: PauliLabel


def event_to_json(event) -> dict:
    if isinstance(event, Measured):
        return {"kind": "measured", "party": event.party, "pair": list(event.pair),
                "outcome": event.outcome.value}
    if isinstance(event, Broadcast):
        return {"kind": "broadcast", "party": event.party, "outcome": event.outcome.value}
    if isinstance(event, Corrected):
        return {"kind": "corrected", "party": event.party, "pauli": event.pauli.value}
    raise TypeError(f"not a transcript event: {event!r}")


def transcript_to_json_lines(transcript) -> list[dict]:
    return [event_to_json(e) for e in transcript]


@dataclass(frozen=True, eq=False)
class BranchState:
    """One measurement branch: the post-correction state (None when the
    branch has zero probability), its joint probability including mixture
    weights, and the classical transcript that produced it."""

    state: StateVector | None
    joint_prob: float
    transcript: tuple
    component_index: int = 0


@dataclass(frozen=True)
class OutcomeReport:
    """Flattened record of one end-to-end branch."""

    component_index: int
    alice_outcome: BellOutcome
    bob_outcomes: tuple[BellOutcome, ...]
    joint_prob: float
    correction: PauliLabel | None
    fidelity: float | None

    def to_json(self) -> dict:
        return {
            "component": self.component_index,
            "alice": self.alice_outcome.value,
            "bobs": [o.value for o in self.bob_outcomes],
            "joint_prob": self.joint_prob,
            "correction": self.correction.value if self.correction else None,
            "fidelity": self.fidelity,
        }


def distribution_correction(
    variant: Variant, outcome: BellOutcome, n_parties: int
) -> tuple[PauliLabel, ...]:
    """Local correction each party applies after the sender's broadcast.

    Parity channels need the same Pauli at every party. Staircase channels
    concentrate the phase on party 1 and the bit flip everywhere: only the
    first support bit can differ between supports (it alternates along the
    staircase), so the phase correction must act there, while the flip
    pattern is uniform. Custom channels reuse the parity rule.
    """
    uniform = CORRECTION_FOR_OUTCOME[outcome]
    if variant is not Variant.DOMINO:
        return (uniform,) * n_parties
    if outcome is BellOutcome.PHI_PLUS:
        return (PauliLabel.I,) * n_parties
    if outcome is BellOutcome.PHI_MINUS:
        return (PauliLabel.Z,) + (PauliLabel.I,) * (n_parties - 1)
    if outcome is BellOutcome.PSI_PLUS:
        return (PauliLabel.X,) * n_parties
    return (PauliLabel.Y,) + (PauliLabel.X,) * (n_parties - 1)


_MINUS_TYPES = frozenset({BellOutcome.PSI_MINUS, BellOutcome.PHI_MINUS})
_FLIP_TYPES = frozenset({BellOutcome.PSI_PLUS, BellOutcome.PSI_MINUS})


def concentration_correction(variant: Variant, outcomes) -> PauliLabel:
    """Single receiver-side correction folding all parties' outcomes.

    For parity channels each outcome contributes its own Pauli and the
    product collapses them. For staircase channels only party 1's outcome
    decides the bit flip (its support bit is the only one that varies), and
    the phase flips once per minus-signed outcome anywhere.
    """
    outcomes = tuple(outcomes)
    if not outcomes:
        raise ValueError("at least one outcome required")
    if variant is Variant.DOMINO:
        flips = 1 if outcomes[0] in _FLIP_TYPES else 0
        phases = sum(1 for o in outcomes if o in _MINUS_TYPES)
        return pauli_product([PauliLabel.X] * flips + [PauliLabel.Z] * (phases % 2))
    return pauli_product([CORRECTION_FOR_OUTCOME[o] for o in outcomes])


def _check_mode(mode: str, seed) -> None:
    if mode not in ("exhaustive", "sampled"):
        raise ValueError(f"mode must be 'exhaustive' or 'sampled', got {mode!r}")
    if mode == "sampled" and seed is None:
        raise ValueError("sampled mode needs a seed or Generator")


def distribute(
    input_qubit: InputQubit, channel: ChannelSpec, mode: str = "exhaustive", seed=None
) -> list[BranchState]:
    """Run the distribution phase.

    Returns one BranchState per (component, sender outcome) in exhaustive
    mode — outcomes in Bell order within each component — or a single drawn
    branch in sampled mode.
    """
    _check_mode(mode, seed)
    if channel.endpoint is not Endpoint.SENDER_FIRST:
        raise ValueError("distribution needs a sender-side channel (endpoint 'sender')")
    n = channel.n_parties
    input_state = input_qubit.to_state()
    bob_names = tuple(f"bob{i}" for i in range(1, n + 1))

    branches: list[BranchState] = []
    for ci, comp in enumerate(channel.components):
        comp_state = build_channel_component(comp, channel.variant, Endpoint.SENDER_FIRST, n)
        joint = tensor(input_state, comp_state)
        rows = _pair_rows(joint.amps, joint.num_qubits, 1, 2)
        for outcome in BELL_OUTCOMES:
            row = rows[outcome.index]
            raw = float(np.real(np.vdot(row, row)))
            if channel.faithfulness_guaranteed:
                assert abs(4.0 * raw - 1.0) < PROB_SANITY_ATOL, (
                    f"outcome {outcome.value} has conditional probability {raw}, expected 1/4"
                )
            corrections = distribution_correction(channel.variant, outcome, n)
            transcript = [
                Measured("alice", (1, 2), outcome),
                Broadcast("alice", bob_names, outcome),
            ]
            transcript += [Corrected(bob_names[i], corrections[i]) for i in range(n)]
            if raw < NULL_PROB_EPS:
                branches.append(BranchState(None, comp.weight * raw, tuple(transcript), ci))
                continue
            amps = row / math.sqrt(raw)
            for i, label in enumerate(corrections):
                if label is not PauliLabel.I:
                    amps = _apply_1q(amps, n, i + 1, PAULI_MATRICES[label])
            branches.append(
                BranchState(StateVector(n, amps), comp.weight * raw, tuple(transcript), ci)
            )

    if mode == "exhaustive":
        return branches
    gen = as_rng(seed)
    probs = np.array([b.joint_prob for b in branches])
    pick = int(gen.choice(len(branches), p=probs / probs.sum()))
    return [branches[pick]]


def _conc_events(n: int):
    """Measurement/broadcast event pairs per (party index, outcome), built
    once so exhaustive enumeration reuses them across branches."""
    table = []
    for i in range(1, n + 1):
        name = f"bob{i}"
        pair = (i, n + i)
        table.append({
            o: (Measured(name, pair, o), Broadcast(name, ("charlie",), o))
            for o in BELL_OUTCOMES
        })
    return table


def concentrate(
    bobs: BranchState, channel: ChannelSpec, mode: str = "exhaustive", seed=None
) -> list[BranchState]:
    """Run the concentration phase on a distributed branch.

    Registers are ordered (bob qubits 1..n, channel qubits n+1..2n+1):
    party i measures the pair (i, n+i) and the receiver holds qubit 2n+1.
    Exhaustive mode enumerates all 4^n outcome tuples per component, sharing
    the projection work along common outcome prefixes.
    """
    _check_mode(mode, seed)
    if channel.endpoint is not Endpoint.RECEIVER_LAST:
        raise ValueError("concentration needs a receiver-side channel (endpoint 'receiver')")
    if bobs.state is None:
        raise ValueError("cannot concentrate a zero-probability branch")
    n = channel.n_parties
    if bobs.state.num_qubits != n:
        raise ValueError(
            f"distributed state has {bobs.state.num_qubits} qubits, channel expects {n}"
        )
    if mode == "exhaustive" and n > MAX_EXHAUSTIVE_PARTIES:
        raise CapacityError(
            f"exhaustive enumeration capped at {MAX_EXHAUSTIVE_PARTIES} parties, got {n}"
        )

    events = _conc_events(n)
    branches: list[BranchState] = []
    gen = as_rng(seed) if mode == "sampled" else None

    component_items = list(enumerate(channel.components))
    if mode == "sampled" and len(component_items) > 1:
        weights = np.array([c.weight for c in channel.components])
        keep = int(gen.choice(len(weights), p=weights / weights.sum()))
        component_items = [component_items[keep]]

    for cj, comp in component_items:
        comp_state = build_channel_component(comp, channel.variant, Endpoint.RECEIVER_LAST, n)
        joint = tensor(bobs.state, comp_state)

        def emit(amps: np.ndarray, outcomes: tuple[BellOutcome, ...], cj=cj, comp=comp):
            raw = float(np.real(np.vdot(amps, amps)))
            label = concentration_correction(channel.variant, outcomes)
            transcript = list(bobs.transcript)
            for i, o in enumerate(outcomes):
                transcript.extend(events[i][o])
            transcript.append(Corrected("charlie", label))
            joint_p = bobs.joint_prob * comp.weight * raw
            index = bobs.component_index * len(channel.components) + cj
            if raw < NULL_PROB_EPS:
                branches.append(BranchState(None, joint_p, tuple(transcript), index))
                return
            vec = PAULI_MATRICES[label] @ (amps / math.sqrt(raw))
            branches.append(BranchState(StateVector(1, vec), joint_p, tuple(transcript), index))

        if mode == "exhaustive":
            def walk(amps: np.ndarray, step: int, outcomes: tuple[BellOutcome, ...]):
                if step == n:
                    emit(amps, outcomes)
                    return
                # After `step` measurements the live registers are
                # (bob qubits step+1..n, channel qubits n+1..2n+1), so the
                # next pair sits at positions (1, n-step+1) of 2n+1-2*step.
                num = 2 * n + 1 - 2 * step
                rows = _pair_rows(amps, num, 1, n - step + 1)
                for outcome in BELL_OUTCOMES:
                    walk(rows[outcome.index], step + 1, outcomes + (outcome,))

            walk(joint.amps, 0, ())
        else:
            amps = joint.amps
            outcomes: tuple[BellOutcome, ...] = ()
            dead = False
            for step in range(n):
                num = 2 * n + 1 - 2 * step
                rows = _pair_rows(amps, num, 1, n - step + 1)
                probs = np.real(np.einsum("ij,ij->i", rows.conj(), rows))
                probs[probs < NULL_PROB_EPS] = 0.0
                total = probs.sum()
                if total <= 0.0:
                    dead = True
                    break
                pick = int(gen.choice(4, p=probs / total))
                outcomes += (BELL_OUTCOMES[pick],)
                amps = rows[pick]
            if not dead:
                emit(amps, outcomes)

    return branches


def report_from_branch(branch: BranchState, input_state: StateVector) -> OutcomeReport:
    """Summarize a fully concentrated branch against the original input."""
    alice = None
    bob_outcomes: list[BellOutcome] = []
    correction = None
    for event in branch.transcript:
        if isinstance(event, Measured):
            if event.party == "alice":
                alice = event.outcome
            else:
                bob_outcomes.append(event.outcome)
        elif isinstance(event, Corrected) and event.party == "charlie":
            correction = event.pauli
    fidelity = None
    if branch.state is not None and branch.joint_prob > NULL_PROB_EPS:
        fidelity = fidelity_pure(branch.state, input_state)
    return OutcomeReport(
        component_index=branch.component_index,
        alice_outcome=alice,
        bob_outcomes=tuple(bob_outcomes),
        joint_prob=branch.joint_prob,
        correction=correction,
        fidelity=fidelity,
    )


def run_end_to_end(
    input_qubit: InputQubit,
    dist_channel: ChannelSpec,
    conc_channel: ChannelSpec,
    mode: str = "exhaustive",
    seed=None,
) -> list[OutcomeReport]:
    """Distribute then concentrate, reporting every branch (or one sampled
    trajectory) with its fidelity against the input."""
    _check_mode(mode, seed)
    if dist_channel.n_parties != conc_channel.n_parties:
        raise ValueError(
            f"party mismatch: distribution has {dist_channel.n_parties}, "
            f"concentration has {conc_channel.n_parties}"
        )
    families = {dist_channel.variant, conc_channel.variant} - {Variant.CUSTOM}
    if len(families) > 1:
        raise ValueError("distribution and concentration channels use different support families")

    gen = as_rng(seed) if mode == "sampled" else None
    input_state = input_qubit.to_state()
    n_conc = len(conc_channel.components)

    reports: list[OutcomeReport] = []
    for db in distribute(input_qubit, dist_channel, mode, gen):
        if db.state is None:
            padded = dataclasses.replace(db, component_index=db.component_index * n_conc)
            reports.append(report_from_branch(padded, input_state))
            continue
        for cb in concentrate(db, conc_channel, mode, gen):
            reports.append(report_from_branch(cb, input_state))
    return reports
