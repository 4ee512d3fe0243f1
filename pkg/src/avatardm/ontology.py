"""Requirement ontology, keyword-cue utterance interpretation, and the
depth-first prompt traversal that drives a customization dialogue.

The interpreter is deliberately cue-based: the shipped domain is fully
coverable by affirmation/denial/information/exit cues, and scores are
smoothed into a proper distribution so the belief update never degenerates.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import AsymmetricConflict, CycleDetected, DanglingReference, OntologyError


class DialogueObservation(IntEnum):
    AFFIRM = 0
    DENY = 1
    REQUEST_INFO = 2
    UNKNOWN = 3
    EXIT = 4

    @property
    def label(self) -> str:
        return self.name.lower()


OBSERVATION_LABELS = tuple(o.label for o in DialogueObservation)


class IntentionState(IntEnum):
    """Hidden user intention toward the feature under discussion."""

    WANTS_FEATURE = 0
    REJECTS_FEATURE = 1
    NEEDS_INFO = 2
    CONFUSED = 3

    @property
    def label(self) -> str:
        return self.name.lower()


INTENTION_LABELS = tuple(s.label for s in IntentionState)

NODE_KINDS = ("required", "optional", "quality_constraint")


@dataclass(frozen=True)
class OntologyNode:
    id: str
    name: str
    kind: str
    description: str = ""
    children: tuple[str, ...] = ()
    conflicts_with: tuple[str, ...] = ()
    prompt: str = ""
    info_text: str = ""


@dataclass(frozen=True)
class Ontology:
    root: str
    nodes: dict[str, OntologyNode]
    greeting: str = ""

    def __getitem__(self, node_id: str) -> OntologyNode:
        return self.nodes[node_id]

    def __len__(self) -> int:
        return len(self.nodes)

    def node_index(self, node_id: str) -> int:
        return list(self.nodes).index(node_id)

    def decidable_ids(self) -> list[str]:
        """Nodes that get prompted (everything except auto-added required ones)."""
        return [n.id for n in self.nodes.values() if n.kind != "required"]


def load_ontology(source: str | Path | dict) -> Ontology:
    """Load and validate a requirement ontology from a JSON document."""
    if isinstance(source, dict):
        doc = source
    else:
        doc = json.loads(Path(source).read_text(encoding="utf-8"))
    raw_nodes = doc.get("nodes")
    if not raw_nodes:
        raise OntologyError("ontology has no nodes")
    nodes: dict[str, OntologyNode] = {}
    for i, raw in enumerate(raw_nodes):
        node_id = raw.get("id")
        if not node_id:
            raise OntologyError(f"node #{i} has no id")
        if node_id in nodes:
            raise OntologyError(f"duplicate node id {node_id!r}")
        kind = raw.get("kind", "optional")
        if kind not in NODE_KINDS:
            raise OntologyError(f"node {node_id!r}: unknown kind {kind!r}")
        nodes[node_id] = OntologyNode(
            id=node_id,
            name=raw.get("name", node_id),
            kind=kind,
            description=raw.get("description", ""),
            children=tuple(raw.get("children", ())),
            conflicts_with=tuple(raw.get("conflicts_with", ())),
            prompt=raw.get("prompt", ""),
            info_text=raw.get("info_text", ""),
        )
    root = doc.get("root")
    if root is None and len(nodes) == 1:
        root = next(iter(nodes))
    if root not in nodes:
        raise DanglingReference(f"root {root!r} is not a node")

    parents: dict[str, str] = {}
    for node in nodes.values():
        for child in node.children:
            if child not in nodes:
                raise DanglingReference(f"node {node.id!r} lists missing child {child!r}")
            if child in parents:
                raise CycleDetected(
                    f"node {child!r} has two parents ({parents[child]!r} and {node.id!r})"
                )
            parents[child] = node.id
        for other in node.conflicts_with:
            if other not in nodes:
                raise DanglingReference(f"node {node.id!r} conflicts with missing {other!r}")
            if node.id not in nodes[other].conflicts_with:
                raise AsymmetricConflict(
                    f"conflict {node.id!r} -> {other!r} is not declared both ways"
                )

    # Walk from the root; revisiting a node on the current path is a cycle.
    visited: set[str] = set()

    def walk(node_id: str, path: set[str]) -> None:
        if node_id in path:
            raise CycleDetected(f"cycle through node {node_id!r}")
        visited.add(node_id)
        for child in nodes[node_id].children:
            walk(child, path | {node_id})

    walk(root, set())
    return Ontology(root=root, nodes=nodes, greeting=doc.get("greeting", ""))


# ---------------------------------------------------------------------------
# Utterance interpretation

AFFIRM_TOKENS = frozenset({"yes", "sure", "okay", "add", "prefer", "love"})
AFFIRM_PHRASES = ("i want", "please add", "i will")
DENY_TOKENS = frozenset({"no", "don't", "not"})
INFO_TOKENS = frozenset({"what", "which", "how", "explain", "mean"})
EXIT_TOKENS = frozenset({"quit", "exit"})

# A one-word "okay" is a backchannel acknowledgment, not an answer; a bare
# interrogative ("What?") carries no analyzable content. Both read as
# unrecognizable so the agent re-engages instead of committing a decision.
ACK_TOKENS = frozenset({"okay", "ok"})

SMOOTHING = 0.05

_WORD_RE = re.compile(r"[a-z']+")


def _tokens(text: str) -> list[str]:
    return _WORD_RE.findall(text.lower())


def interpret(text: str, node: Optional[OntologyNode] = None) -> np.ndarray:
    """Distribution over dialogue observations from keyword cues.

    Cue hits score +1 each; a trailing question mark reinforces an
    information request only when an information cue word is present. The
    raw scores are smoothed so every observation keeps positive mass.
    """
    del node  # cues are domain-generic; the slot is kept for future use
    tokens = _tokens(text)
    lowered = " ".join(tokens)
    hits = np.zeros(len(DialogueObservation))

    single = len(tokens) == 1
    if not (single and tokens[0] in ACK_TOKENS):
        hits[DialogueObservation.AFFIRM] += sum(1 for t in tokens if t in AFFIRM_TOKENS)
        hits[DialogueObservation.AFFIRM] += sum(1 for p in AFFIRM_PHRASES if p in lowered)
    hits[DialogueObservation.DENY] += sum(1 for t in tokens if t in DENY_TOKENS)
    if not single:
        info_hits = sum(1 for t in tokens if t in INFO_TOKENS)
        if info_hits and "?" in text:
            info_hits += 1
        hits[DialogueObservation.REQUEST_INFO] += info_hits
    hits[DialogueObservation.EXIT] += sum(1 for t in tokens if t in EXIT_TOKENS)
    if hits.sum() == 0:
        hits[DialogueObservation.UNKNOWN] = 1.0

    smoothed = hits + SMOOTHING
    return smoothed / smoothed.sum()


def observe(text: str, node: Optional[OntologyNode] = None) -> DialogueObservation:
    """Most likely observation for an utterance."""
    return DialogueObservation(int(np.argmax(interpret(text, node))))


# ---------------------------------------------------------------------------
# Prompt traversal

COMPLETION_TEXT = "The customization process is complete. Thank you for your cooperation."


@dataclass
class Traversal:
    """Cursor plus decision state for one session's walk over the ontology.

    Required nodes are committed automatically; optional and
    quality-constraint nodes are prompted depth first. Rejecting a node
    skips its subtree, and accepting a node auto-rejects everything it
    conflicts with.
    """

    ontology: Ontology
    decisions: dict[str, bool] = field(default_factory=dict)
    cursor: Optional[str] = None
    prompt_count: int = 0

    def __post_init__(self):
        self._advance()

    @property
    def complete(self) -> bool:
        return self.cursor is None

    def current_node(self) -> Optional[OntologyNode]:
        return None if self.cursor is None else self.ontology[self.cursor]

    def prompt(self) -> str:
        node = self.current_node()
        if node is None:
            return COMPLETION_TEXT
        return node.prompt or f"Do you want the {node.name} functionality?"

    def _advance(self) -> None:
        stack = [self.ontology.root]
        while stack:
            node_id = stack.pop()
            node = self.ontology[node_id]
            if node_id not in self.decisions:
                if node.kind == "required":
                    self.decisions[node_id] = True
                else:
                    if self.cursor != node_id:
                        self.prompt_count += 1
                    self.cursor = node_id
                    return
            if self.decisions[node_id]:
                stack.extend(reversed(node.children))
        self.cursor = None

    def decide(self, accept: bool) -> Optional[OntologyNode]:
        """Commit the decision for the node under the cursor and move on.

        Returns the node that was decided, or None when the walk had already
        completed (the decision then has nothing to bind to).
        """
        node = self.current_node()
        if node is None:
            return None
        self.decisions[node.id] = accept
        if accept:
            for other in node.conflicts_with:
                self.decisions.setdefault(other, False)
        self._advance()
        return node

    def accepted_ids(self) -> list[str]:
        return [nid for nid, ok in self.decisions.items() if ok]


def next_prompt(
    ontology: Ontology, decisions: dict[str, bool]
) -> tuple[str, Optional[str]]:
    """Functional view of the traversal: the next agent prompt and the node
    it targets (None once every node is decided)."""
    walk = Traversal(ontology=ontology, decisions=dict(decisions))
    return walk.prompt(), walk.cursor
