"""Seeded random corpus builders shared by property and acceptance tests.

Everything here is deterministic given the Random instance, so corpora
can be regenerated identically across runs and platforms.
"""

from __future__ import annotations

import random

from frameforge.frame_model import (
    CONCEPT,
    ROLE_A,
    ROLE_G,
    ROLE_I,
    VAR,
    BoundingBox,
    FrameDiagram,
    FrameElement,
)
from frameforge.translate import GENERALIZATION_ROLE_NAME, INSTANCE_ROLE_NAME
from frameforge.uml_model import (
    STANDARD_ATTRIBUTES,
    RelationKind,
    UmlClass,
    UmlComment,
    UmlInstance,
    UmlModel,
    UmlRelation,
)

#: Rich alphabet exercising XML escaping and non-ASCII round trips.
NAME_ALPHABET = (
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
    " _.-&<>\"'юзеры漢字"
)
#: Restricted alphabet for corpora where PlantUML text must stay injective.
PLAIN_ALPHABET = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 _.-"


def _name(rng: random.Random, alphabet: str = NAME_ALPHABET, max_len: int = 12) -> str:
    return "".join(rng.choice(alphabet) for _ in range(rng.randint(1, max_len)))


def _bbox(rng: random.Random) -> BoundingBox:
    return BoundingBox(
        rng.randint(-500, 500), rng.randint(-500, 500), rng.randint(1, 300), rng.randint(1, 200)
    )


def build_random_diagram(
    rng: random.Random,
    max_elements: int = 200,
    geometry: str = "mixed",
    alphabet: str = NAME_ALPHABET,
) -> FrameDiagram:
    """A valid, translation-ready diagram: every Concept has exactly one
    outgoing i arc, g arcs form a DAG over Vars, i/g arcs carry their
    conventional names.  ``geometry`` is "all", "none" or "mixed"."""

    def box() -> BoundingBox | None:
        if geometry == "none":
            return None
        if geometry == "mixed" and rng.random() < 0.5:
            return None
        return _bbox(rng)

    def desc() -> str | None:
        return _name(rng, alphabet) if rng.random() < 0.3 else None

    n_vars = rng.randint(0, max(1, max_elements // 4))
    budget = max_elements - n_vars
    n_concepts = rng.randint(0, max(0, min(budget // 2, n_vars * 3))) if n_vars else 0
    budget -= 2 * n_concepts  # each concept also costs one i arc
    n_g = rng.randint(0, max(0, min(budget, 2 * (n_vars - 1)))) if n_vars > 1 else 0
    budget -= n_g
    n_a = rng.randint(0, max(0, min(budget, n_vars))) if n_vars > 1 else 0

    next_id = 0

    def fresh_id() -> int:
        nonlocal next_id
        next_id += rng.randint(1, 3)  # ids are unique but not contiguous
        return next_id

    vars_ = [
        FrameElement(fresh_id(), VAR, _name(rng, alphabet), bbox=box(), description=desc())
        for _ in range(n_vars)
    ]
    concepts = [
        FrameElement(fresh_id(), CONCEPT, _name(rng, alphabet), bbox=box(), description=desc())
        for _ in range(n_concepts)
    ]
    arcs: list[FrameElement] = []
    for concept in concepts:
        target = rng.choice(vars_)
        arcs.append(
            FrameElement(fresh_id(), ROLE_I, INSTANCE_ROLE_NAME, bbox=box(), prev=concept.id, next=target.id)
        )
    for _ in range(n_g):
        j = rng.randint(1, n_vars - 1)
        k = rng.randint(0, j - 1)  # always points at an earlier Var: acyclic
        arcs.append(
            FrameElement(
                fresh_id(), ROLE_G, GENERALIZATION_ROLE_NAME, bbox=box(), prev=vars_[j].id, next=vars_[k].id
            )
        )
    for _ in range(n_a):
        j = rng.randint(0, n_vars - 1)
        k = rng.randint(0, n_vars - 1)
        while k == j:
            k = rng.randint(0, n_vars - 1)
        arcs.append(
            FrameElement(
                fresh_id(), ROLE_A, _name(rng, alphabet), bbox=box(), prev=vars_[j].id, next=vars_[k].id
            )
        )

    elements = vars_ + concepts + arcs
    rng.shuffle(elements)
    return FrameDiagram(tuple(elements))


def build_random_model(rng: random.Random, max_classes: int = 8) -> UmlModel:
    """A valid model with extra attributes, slots, comments and anchors,
    relations in canonical order (generalizations by class, instance-of
    by instance, associations last).  Names use the plain alphabet."""
    n_classes = rng.randint(0, max_classes)
    classes: list[UmlClass] = []
    for index in range(n_classes):
        attrs = list(STANDARD_ATTRIBUTES)
        for k in range(rng.randint(0, 3)):
            attrs.append((f"extra{k}", rng.choice(["int", "string", "date", "real"])))
        classes.append(
            UmlClass(
                f"C{index + 1}",
                _name(rng, PLAIN_ALPHABET),
                tuple(attrs),
                _name(rng, PLAIN_ALPHABET) if rng.random() < 0.3 else None,
            )
        )

    rel_counter = 0

    def rel_id() -> str:
        nonlocal rel_counter
        rel_counter += 1
        return f"R{rel_counter}"

    relations: list[UmlRelation] = []
    for index, cls in enumerate(classes):
        if index > 0 and rng.random() < 0.4:
            parent = classes[rng.randint(0, index - 1)]
            relations.append(UmlRelation(rel_id(), RelationKind.GENERALIZATION, cls.id, parent.id))

    instances: list[UmlInstance] = []
    if classes:
        for index in range(rng.randint(0, 6)):
            cls = rng.choice(classes)
            candidates = [name for name, _ in cls.attributes]
            slots = tuple(
                (slot_name, _name(rng, PLAIN_ALPHABET))
                for slot_name in candidates[: rng.randint(0, len(candidates))]
            )
            instances.append(UmlInstance(f"O{index + 1}", _name(rng, PLAIN_ALPHABET), cls.id, slots))
    for inst in instances:
        relations.append(UmlRelation(rel_id(), RelationKind.INSTANCE_OF, inst.id, inst.classifier))

    if len(classes) > 1:
        for _ in range(rng.randint(0, 4)):
            src, dst = rng.sample(classes, 2)
            relations.append(
                UmlRelation(rel_id(), RelationKind.ASSOCIATION, src.id, dst.id, label=_name(rng, PLAIN_ALPHABET))
            )

    known_ids = [c.id for c in classes] + [i.id for i in instances] + [r.id for r in relations]
    comments = []
    for _ in range(rng.randint(0, 2)):
        anchor = rng.choice(known_ids) if known_ids and rng.random() < 0.5 else None
        comments.append(UmlComment(_name(rng, PLAIN_ALPHABET), anchor))

    return UmlModel(
        name="",
        classes=tuple(classes),
        instances=tuple(instances),
        relations=tuple(relations),
        comments=tuple(comments),
    )


def build_big_diagram(total: int = 1000) -> FrameDiagram:
    """Deterministic diagram of exactly ``total`` elements (total % 8 == 0),
    geometry included, for throughput checks."""
    assert total % 8 == 0
    quarter = total // 4
    rng = random.Random(4224)
    elements: list[FrameElement] = []
    vars_: list[FrameElement] = []
    for index in range(quarter):
        var = FrameElement(len(elements) + 1, VAR, f"slot_{index}", bbox=_bbox(rng))
        vars_.append(var)
        elements.append(var)
    concepts: list[FrameElement] = []
    for index in range(quarter):
        concept = FrameElement(len(elements) + 1, CONCEPT, f"value_{index}", bbox=_bbox(rng))
        concepts.append(concept)
        elements.append(concept)
    for index, concept in enumerate(concepts):
        target = vars_[index % len(vars_)]
        elements.append(
            FrameElement(len(elements) + 1, ROLE_I, INSTANCE_ROLE_NAME, bbox=_bbox(rng),
                         prev=concept.id, next=target.id)
        )
    for index in range(total // 8):
        child, parent = vars_[index + 1], vars_[index]
        elements.append(
            FrameElement(len(elements) + 1, ROLE_G, GENERALIZATION_ROLE_NAME, bbox=_bbox(rng),
                         prev=child.id, next=parent.id)
        )
    for index in range(total - len(elements)):
        src = vars_[(2 * index) % len(vars_)]
        dst = vars_[(2 * index + 1) % len(vars_)]
        elements.append(
            FrameElement(len(elements) + 1, ROLE_A, f"link_{index}", bbox=_bbox(rng),
                         prev=src.id, next=dst.id)
        )
    return FrameDiagram(tuple(elements))
