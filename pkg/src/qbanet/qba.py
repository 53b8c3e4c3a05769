"""Three-party Byzantine agreement over one-time universal-hash signatures.

Alice is the commanding general, Bob lieutenant 1, Charlie lieutenant 2.
A run has two signing rounds followed by a majority decision:

  round 1: Alice signs her order to Bob; Bob relays the package plus his
           own key blocks to Charlie; Charlie returns his blocks to Bob;
           both recover Alice's pads by XOR and verify.  The round is
           valid only if both announce accept, and only then does each
           lieutenant add the message he received to his list.
  round 2: same with Bob and Charlie swapped.
  output:  each lieutenant outputs the strict majority of his list, or
           the predetermined tie-breaker Delta.

The interactive-consistency conditions: IC1, all loyal lieutenants
output the same order; IC2, when the commander is loyal they output her
order.  Adversary strategies cover an equivocating commander, message
substitution by a relaying lieutenant, cross-round package replay, and
withheld key disclosure (treated as a rejected round).

Classical baselines with the same message alphabet witness the 3f+1
bound: the four-party oral protocol reaches consensus with one traitor,
the three-party oral protocol leaves the loyal lieutenant with two
indistinguishable transcripts, and the three-party signature protocol
succeeds only by adding a trusted authority - a fourth participant.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .keysim import LinkParams, ThreePartyKeys
from .otuh import (
    DEFAULT_L,
    ROLE_X,
    ROLE_Y,
    KeyBlock,
    ProtocolError,
    SignaturePackage,
    recover_signer_key,
    sign,
    tampered,
    verify,
)
from .rng import stream

ALICE = "Alice"
BOB = "Bob"
CHARLIE = "Charlie"
EMERY = "Emery"
AUTHORITY = "Authority"

LIEUTENANTS = (BOB, CHARLIE)

# Sentinel outputs, type-distinct from any bytes message.
NO_DECISION = "no-decision"
UNDECIDABLE = "undecidable"

STRATEGIES = (
    "honest",
    "equivocate",
    "forge_bob",
    "forge_charlie",
    "replay_charlie",
    "withhold_charlie",
)

# strategy -> (commander_loyal, faulty_party)
_STRATEGY_FAULTS = {
    "honest": (True, None),
    "equivocate": (False, ALICE),
    "forge_bob": (True, BOB),
    "forge_charlie": (True, CHARLIE),
    "replay_charlie": (True, CHARLIE),
    "withhold_charlie": (True, CHARLIE),
}


def _default_link_ab() -> LinkParams:
    return LinkParams()


def _default_link_ac() -> LinkParams:
    return LinkParams(qber_z=0.0340, qber_x=0.0367, f_ec=1.1627)


@dataclass
class ScenarioConfig:
    """Everything needed to reproduce one agreement run bit-exactly."""

    seed: int = 0
    l: int = DEFAULT_L
    n_events: int = 30000
    messages: tuple[bytes, bytes] = (
        b"attack at 2:00 p.m. with plan A",
        b"retreat at 3:00 p.m. with plan B",
    )
    adversary_strategy: str = "honest"
    commander_loyal: bool = True
    faulty_party: Optional[str] = None
    delta_rule: str = "m1"
    link_ab: LinkParams = field(default_factory=_default_link_ab)
    link_ac: LinkParams = field(default_factory=_default_link_ac)
    schema_version: int = 1

    @classmethod
    def for_strategy(cls, strategy: str, **kwargs) -> "ScenarioConfig":
        """Scenario with loyalty fields filled in consistently."""
        if strategy not in _STRATEGY_FAULTS:
            raise ValueError(f"unknown adversary strategy: {strategy!r}")
        loyal, faulty = _STRATEGY_FAULTS[strategy]
        return cls(
            adversary_strategy=strategy,
            commander_loyal=loyal,
            faulty_party=faulty,
            **kwargs,
        )

    @property
    def delta(self) -> bytes:
        return self.messages[0] if self.delta_rule == "m1" else self.messages[1]

    def validate(self) -> None:
        if self.adversary_strategy not in _STRATEGY_FAULTS:
            raise ValueError(f"unknown adversary strategy: {self.adversary_strategy!r}")
        loyal, faulty = _STRATEGY_FAULTS[self.adversary_strategy]
        if self.commander_loyal != loyal or self.faulty_party != faulty:
            raise ValueError(
                f"strategy {self.adversary_strategy!r} implies commander_loyal={loyal}, "
                f"faulty_party={faulty}; got {self.commander_loyal}, {self.faulty_party}"
            )
        if self.delta_rule not in ("m1", "m2"):
            raise ValueError("delta_rule must be 'm1' or 'm2'")
        if len(self.messages) != 2 or self.messages[0] == self.messages[1]:
            raise ValueError("need two distinct messages")
        if self.l % 8 != 0 or self.l <= 0:
            raise ValueError("l must be a positive multiple of 8")

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "seed": self.seed,
            "l": self.l,
            "n_events": self.n_events,
            "messages": [m.decode("utf-8", "backslashreplace") for m in self.messages],
            "adversary_strategy": self.adversary_strategy,
            "commander_loyal": self.commander_loyal,
            "faulty_party": self.faulty_party,
            "delta_rule": self.delta_rule,
            "link_ab": _link_to_dict(self.link_ab),
            "link_ac": _link_to_dict(self.link_ac),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioConfig":
        kwargs = {}
        if "messages" in d:
            kwargs["messages"] = tuple(m.encode("utf-8") for m in d["messages"])
        if "link_ab" in d:
            kwargs["link_ab"] = _link_from_dict(d["link_ab"])
        if "link_ac" in d:
            kwargs["link_ac"] = _link_from_dict(d["link_ac"])
        cfg = cls(
            seed=int(d.get("seed", 0)),
            l=int(d.get("l", DEFAULT_L)),
            n_events=int(d.get("n_events", 30000)),
            adversary_strategy=d.get("adversary_strategy", "honest"),
            commander_loyal=bool(d.get("commander_loyal", True)),
            faulty_party=d.get("faulty_party"),
            delta_rule=d.get("delta_rule", "m1"),
            schema_version=int(d.get("schema_version", 1)),
            **kwargs,
        )
        cfg.validate()
        return cfg


def _link_to_dict(lp: LinkParams) -> dict:
    return {
        "qber_z": lp.qber_z,
        "qber_x": lp.qber_x,
        "pair_rate": lp.pair_rate,
        "f_ec": lp.f_ec,
        "eps_ec": lp.eps_ec,
        "seed": lp.seed,
        "keep_x": lp.keep_x,
        "keep_z": lp.keep_z,
    }


def _link_from_dict(d: dict) -> LinkParams:
    return LinkParams(
        qber_z=float(d.get("qber_z", 0.0342)),
        qber_x=float(d.get("qber_x", 0.0476)),
        pair_rate=float(d.get("pair_rate", 1.0)),
        f_ec=float(d.get("f_ec", 1.1648)),
        eps_ec=float(d.get("eps_ec", 1e-10)),
        seed=int(d.get("seed", 0)),
        keep_x=float(d.get("keep_x", 1.0)),
        keep_z=float(d.get("keep_z", 1.0)),
    )


@dataclass
class TranscriptEntry:
    step: int
    sender: str
    receiver: str
    kind: str
    payload: dict

    def to_dict(self) -> dict:
        return {
            "step": self.step,
            "sender": self.sender,
            "receiver": self.receiver,
            "kind": self.kind,
            "payload": self.payload,
        }


class Transcript:
    """Ordered record of every protocol message in one run."""

    def __init__(self):
        self.entries: list[TranscriptEntry] = []

    def add(self, sender: str, receiver: str, kind: str, payload: dict) -> TranscriptEntry:
        entry = TranscriptEntry(len(self.entries), sender, receiver, kind, payload)
        self.entries.append(entry)
        return entry

    def view(self, party: str) -> bytes:
        """Canonical serialization of everything `party` received."""
        seen = [e.to_dict() for e in self.entries if e.receiver == party]
        return json.dumps(seen, sort_keys=True, separators=(",", ":")).encode()

    def to_dict(self) -> dict:
        return {"entries": [e.to_dict() for e in self.entries]}

    def digest(self) -> str:
        return hashlib.sha256(
            json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")).encode()
        ).hexdigest()

    def check_causality(self) -> bool:
        """Every key disclosure must follow a delivered package of its round."""
        delivered_rounds = set()
        for e in self.entries:
            if e.kind == "package":
                delivered_rounds.add(e.payload["round"])
            elif e.kind == "keys" and e.payload["round"] not in delivered_rounds:
                return False
        return True


@dataclass
class Verdict:
    """Final per-lieutenant outputs plus consistency flags."""

    outputs: dict[str, object]
    lists: dict[str, list[bytes]]
    ic1: Optional[bool] = None
    ic2: Optional[bool] = None
    aborted: bool = False
    status: str = "completed"
    forgery_attempts: int = 0
    forgeries_accepted: int = 0
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        def enc(v):
            return v.decode("utf-8", "backslashreplace") if isinstance(v, bytes) else v

        return {
            "outputs": {p: enc(v) for p, v in self.outputs.items()},
            "lists": {p: [enc(m) for m in ms] for p, ms in self.lists.items()},
            "ic1": self.ic1,
            "ic2": self.ic2,
            "aborted": self.aborted,
            "status": self.status,
            "forgery_attempts": self.forgery_attempts,
            "forgeries_accepted": self.forgeries_accepted,
            "meta": self.meta,
        }


def majority(msgs, delta):
    """Strictly most frequent message; any tie for the top count gives delta."""
    msgs = list(msgs)
    if not msgs:
        raise ValueError("majority of an empty list is undefined")
    counts = Counter(msgs)
    top = max(counts.values())
    winners = [m for m, c in counts.items() if c == top]
    return winners[0] if len(winners) == 1 else delta


def _pkg_payload(pkg: SignaturePackage, relay: bool = False) -> dict:
    return {
        "round": pkg.round,
        "message": pkg.message.decode("utf-8", "backslashreplace"),
        "sig": pkg.sig.hex(),
        "p": pkg.p.hex(),
        "relay": relay,
    }


def run_three_party(
    scenario: ScenarioConfig, keys: ThreePartyKeys
) -> tuple[Transcript, Verdict]:
    """Execute one two-round agreement run on pre-built key blocks."""
    scenario.validate()
    m1, m2 = scenario.messages
    strategy = scenario.adversary_strategy
    tr = Transcript()
    lists: dict[str, list[bytes]] = {BOB: [], CHARLIE: []}
    forgery_attempts = 0
    forgeries_accepted = 0
    pkg_by_round: dict[int, SignaturePackage] = {}

    for rnd, (fwd, ver) in ((1, (BOB, CHARLIE)), (2, (CHARLIE, BOB))):
        sign_rng = stream(scenario.seed, f"polynomial-sampler/round-{rnd}")
        xa = keys.next_block(ALICE, ROLE_X, rnd)
        ya = keys.next_block(ALICE, ROLE_Y, rnd)
        m_signed = m2 if (strategy == "equivocate" and rnd == 2) else m1
        pkg = sign(m_signed, xa, ya, sign_rng)
        pkg_by_round[rnd] = pkg
        tr.add(ALICE, fwd, "package", _pkg_payload(pkg))

        relayed = pkg
        if strategy == "forge_bob" and rnd == 1:
            relayed = tampered(pkg, m2)
        elif strategy == "forge_charlie" and rnd == 2:
            relayed = tampered(pkg, m2)
        elif strategy == "replay_charlie" and rnd == 2:
            relayed = pkg_by_round[1]

        xf = keys.next_block(fwd, ROLE_X, rnd)
        yf = keys.next_block(fwd, ROLE_Y, rnd)
        xf_bits, yf_bits = xf.consume(), yf.consume()
        tr.add(fwd, ver, "package", _pkg_payload(relayed, relay=True))
        tr.add(fwd, ver, "keys", {"round": rnd, "owner": fwd, "X": xf_bits.hex(), "Y": yf_bits.hex()})

        withheld = strategy == "withhold_charlie" and rnd == 1
        if withheld:
            fwd_ok = ver_ok = False
        else:
            xv = keys.next_block(ver, ROLE_X, rnd)
            yv = keys.next_block(ver, ROLE_Y, rnd)
            xv_bits, yv_bits = xv.consume(), yv.consume()
            tr.add(ver, fwd, "keys", {"round": rnd, "owner": ver, "X": xv_bits.hex(), "Y": yv_bits.hex()})
            x_rec = recover_signer_key(
                xf, KeyBlock(bits=xv_bits, owner=ver, role=ROLE_X, round=rnd)
            )
            y_rec = recover_signer_key(
                yf, KeyBlock(bits=yv_bits, owner=ver, role=ROLE_Y, round=rnd)
            )
            fwd_ok = verify(pkg, x_rec, y_rec)
            ver_ok = verify(relayed, x_rec, y_rec)

        tr.add(fwd, ver, "announce", {"round": rnd, "verdict": "accept" if fwd_ok else "reject"})
        tr.add(ver, fwd, "announce", {"round": rnd, "verdict": "accept" if ver_ok else "reject"})

        if relayed != pkg:
            forgery_attempts += 1
            if ver_ok:
                forgeries_accepted += 1
        if fwd_ok and ver_ok:
            lists[fwd].append(pkg.message)
            lists[ver].append(relayed.message)

    outputs: dict[str, object] = {}
    for lt in LIEUTENANTS:
        outputs[lt] = majority(lists[lt], scenario.delta) if lists[lt] else NO_DECISION

    verdict = Verdict(
        outputs=outputs,
        lists=lists,
        forgery_attempts=forgery_attempts,
        forgeries_accepted=forgeries_accepted,
    )
    verdict.ic1, verdict.ic2 = check_ic(verdict, scenario)
    if not tr.check_causality():
        raise ProtocolError("transcript causality violated")
    return tr, verdict


def check_ic(verdict: Verdict, scenario: ScenarioConfig) -> tuple[bool, Optional[bool]]:
    """Interactive consistency: (IC1, IC2); IC2 is None for a disloyal commander."""
    loyal = [p for p in LIEUTENANTS if p != scenario.faulty_party and p in verdict.outputs]
    outs = [verdict.outputs[p] for p in loyal]
    ic1 = len(set(outs)) <= 1
    if scenario.faulty_party == ALICE:
        return ic1, None
    ic2 = all(o == scenario.messages[0] for o in outs)
    return ic1, ic2


# ---------------------------------------------------------------------------
# Classical baselines
# ---------------------------------------------------------------------------


def run_classical_oral(
    n_parties: int, scenario: ScenarioConfig
) -> tuple[Transcript, Verdict]:
    """Oral-message baseline: relays carry no authentication at all.

    With four parties and one traitor every loyal lieutenant takes the
    majority of three values and consensus holds.  With three parties the
    loyal lieutenant ends up holding {m1, m2} whether the traitor is the
    commander or the other lieutenant - the two transcripts he sees are
    identical - so his verdict is the `undecidable` sentinel.
    """
    if n_parties not in (3, 4):
        raise ValueError("oral baseline supports 3 or 4 parties")
    m1, m2 = scenario.messages
    faulty = scenario.faulty_party
    lieutenants = [BOB, CHARLIE] + ([EMERY] if n_parties == 4 else [])
    if faulty is not None and faulty not in [ALICE] + lieutenants:
        raise ValueError(f"faulty party {faulty!r} is not in this run")

    tr = Transcript()
    received: dict[str, bytes] = {}
    for lt in lieutenants:
        if faulty == ALICE:
            # The disloyal commander deceives exactly one lieutenant.
            msg = m2 if lt == lieutenants[-1] else m1
        else:
            msg = m1
        received[lt] = msg
        tr.add(ALICE, lt, "order", {"message": msg.decode("utf-8", "backslashreplace")})

    lists: dict[str, list[bytes]] = {lt: [received[lt]] for lt in lieutenants}
    for snd in lieutenants:
        for rcv in lieutenants:
            if rcv == snd:
                continue
            msg = m2 if snd == faulty else received[snd]
            tr.add(snd, rcv, "relay", {"message": msg.decode("utf-8", "backslashreplace")})
            lists[rcv].append(msg)

    outputs: dict[str, object] = {}
    for lt in lieutenants:
        if n_parties == 3:
            outputs[lt] = (
                lists[lt][0] if len(set(lists[lt])) == 1 else UNDECIDABLE
            )
        else:
            outputs[lt] = majority(lists[lt], scenario.delta)

    loyal = [lt for lt in lieutenants if lt != faulty]
    verdict = Verdict(outputs=outputs, lists=lists)
    if any(outputs[lt] == UNDECIDABLE for lt in loyal):
        verdict.status = "undecidable"
        verdict.ic1 = verdict.ic2 = None
    else:
        verdict.ic1 = len({outputs[lt] for lt in loyal}) <= 1
        verdict.ic2 = (
            None if faulty == ALICE else all(outputs[lt] == m1 for lt in loyal)
        )
    verdict.meta["n_parties"] = n_parties
    return tr, verdict


def _classical_tag(secret: bytes, message: bytes) -> str:
    return hashlib.sha256(secret + b"|" + message).hexdigest()


def run_classical_signature(scenario: ScenarioConfig) -> tuple[Transcript, Verdict]:
    """Signature baseline: unforgeable tags issued by a trusted authority.

    The authority hands a signing secret to each of the three generals
    before the run, which is exactly the decentralization leak: counting
    it, the system has four participants for one traitor.  A disloyal
    lieutenant cannot mint the commander's tag for a substituted order,
    so his only undetectable move is an honest relay; a disloyal
    commander signs conflicting orders and nonrepudiation pins both on
    her.
    """
    m1, m2 = scenario.messages
    faulty = scenario.faulty_party
    if faulty not in (None, ALICE, BOB, CHARLIE):
        raise ValueError(f"faulty party {faulty!r} is not in this run")
    parties = (ALICE, BOB, CHARLIE)
    tr = Transcript()
    secrets = {
        p: hashlib.sha256(f"{scenario.seed}|{p}".encode()).digest() for p in parties
    }
    for p in parties:
        tr.add(AUTHORITY, p, "credential", {"trusted_authority": True, "holder": p})

    orders = {BOB: m1, CHARLIE: m2 if faulty == ALICE else m1}
    for lt in (BOB, CHARLIE):
        msg = orders[lt]
        tr.add(
            ALICE,
            lt,
            "signed_order",
            {
                "message": msg.decode("utf-8", "backslashreplace"),
                "sig_alice": _classical_tag(secrets[ALICE], msg),
            },
        )

    lists: dict[str, list[bytes]] = {BOB: [orders[BOB]], CHARLIE: [orders[CHARLIE]]}
    for snd, rcv in ((BOB, CHARLIE), (CHARLIE, BOB)):
        # A substituted order would carry an unverifiable commander tag,
        # so even a disloyal lieutenant relays what he was given.
        msg = orders[snd]
        sig_a = _classical_tag(secrets[ALICE], msg)
        tr.add(
            snd,
            rcv,
            "signed_relay",
            {
                "message": msg.decode("utf-8", "backslashreplace"),
                "sig_alice": sig_a,
                "sig_self": _classical_tag(secrets[snd], msg),
            },
        )
        if sig_a == _classical_tag(secrets[ALICE], msg):
            lists[rcv].append(msg)

    outputs: dict[str, object] = {
        lt: majority(lists[lt], scenario.delta) for lt in (BOB, CHARLIE)
    }
    loyal = [lt for lt in (BOB, CHARLIE) if lt != faulty]
    verdict = Verdict(outputs=outputs, lists=lists)
    verdict.ic1 = len({outputs[lt] for lt in loyal}) <= 1
    verdict.ic2 = None if faulty == ALICE else all(outputs[lt] == m1 for lt in loyal)
    verdict.meta["effective_party_count"] = 4
    verdict.meta["trusted_parties"] = [AUTHORITY]
    verdict.meta["fault_bound_note"] = "4 participants, 1 faulty: 3f+1 holds"
    return tr, verdict


def verify_classical_tag(secret: bytes, message: bytes, tag: str) -> bool:
    """Check an authority-issued tag; substitution attacks fail here."""
    return _classical_tag(secret, message) == tag
