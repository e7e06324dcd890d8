from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from time import perf_counter

import networkx as nx

from symgame.errors import AssignmentError, DocumentFormatError, ShapeMismatchError
from symgame.services.game import Game, GameShape, Payoff, to_payoff
from symgame.services.morphisms import GameBijection, bij_apply, enumerate_bijections, format_bijection

logger = logging.getLogger(__name__)

GREEK = "αβγδεζηθικλμνξοπρστυφχψω"

ParamAssignment = Mapping[str, Payoff]


def parameter_name(position: int) -> str:
    """α, β, ..., ω, then α2, β2, ..."""
    letter = GREEK[position % len(GREEK)]
    round_ = position // len(GREEK)
    return letter if round_ == 0 else f"{letter}{round_ + 1}"


@dataclass(frozen=True, slots=True)
class CellPartition:
    """Parameter classes over the cells (player, profile).

    ``class_of[index * n + i]`` is the class of player i at the profile with
    that index. Classes are numbered in first-touch cell order and named
    ``names[k]``.
    """

    shape: GameShape
    class_of: tuple[int, ...]
    names: tuple[str, ...]
    generators: tuple[GameBijection, ...] = ()

    def __post_init__(self) -> None:
        if len(self.class_of) != self.shape.num_cells:
            raise ShapeMismatchError(
                f"Partition covers {len(self.class_of)} cells; the shape has {self.shape.num_cells}."
            )
        if len(set(self.class_of)) != len(self.names) or set(self.class_of) != set(range(len(self.names))):
            raise ShapeMismatchError("Partition class ids must be 0..k-1 with one name per class.")

    @property
    def num_classes(self) -> int:
        return len(self.names)

    def cell(self, player: int, index: int) -> int:
        return index * self.shape.n_players + player

    def name_at(self, player: int, profile: Sequence[int]) -> str:
        return self.names[self.class_of[self.cell(player, self.shape.profile_index(profile))]]

    def classes(self) -> list[list[tuple[int, int]]]:
        """Cells of each class as (player, profile index) pairs."""
        n = self.shape.n_players
        grouped: list[list[tuple[int, int]]] = [[] for _ in self.names]
        for cell, class_id in enumerate(self.class_of):
            grouped[class_id].append((cell % n, cell // n))
        return grouped


def _cell_image(g: GameBijection, player: int, profile: Sequence[int]) -> int:
    target = g.target
    return target.profile_index(bij_apply(g, profile)) * target.n_players + g.player_map(player)


def orbit_partition(shape: GameShape, gens: Sequence[GameBijection]) -> CellPartition:
    """Orbits of (i, s) -> (g(i), g(s)) under the group generated by ``gens``."""
    for g in gens:
        if g.source != shape or g.target != shape:
            raise ShapeMismatchError(f"Generator {format_bijection(g)} does not map the shape to itself.")

    graph = nx.Graph()
    graph.add_nodes_from(range(shape.num_cells))
    n = shape.n_players
    for index, profile in enumerate(shape.profiles()):
        for player in range(n):
            cell = index * n + player
            for g in gens:
                graph.add_edge(cell, _cell_image(g, player, profile))

    components = sorted((min(component), component) for component in nx.connected_components(graph))
    class_of = [0] * shape.num_cells
    for class_id, (_, component) in enumerate(components):
        for cell in component:
            class_of[cell] = class_id
    names = tuple(parameter_name(position) for position in range(len(components)))
    return CellPartition(shape=shape, class_of=tuple(class_of), names=names, generators=tuple(gens))


def generic_assignment(partition: CellPartition) -> dict[str, Payoff]:
    """Pairwise distinct values 1, 2, 3, ... in class order."""
    return {name: Fraction(position + 1) for position, name in enumerate(partition.names)}


def parse_assignment(text: str) -> dict[str, Payoff]:
    assignment: dict[str, Payoff] = {}
    for part in text.split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise DocumentFormatError(f"Parameter {part.strip()!r} must look like α=1.")
        name, value = (token.strip() for token in part.split("=", 1))
        if not name or name in assignment:
            raise DocumentFormatError(f"Parameter {part.strip()!r} is empty or repeated.")
        assignment[name] = to_payoff(value)
    return assignment


def instantiate(partition: CellPartition, assignment: Mapping[str, object]) -> Game:
    missing = [name for name in partition.names if name not in assignment]
    if missing:
        raise AssignmentError(f"Missing parameters: {missing}. Expected: {list(partition.names)}")
    unknown = [name for name in assignment if name not in partition.names]
    if unknown:
        raise AssignmentError(f"Unknown parameters: {unknown}. Expected: {list(partition.names)}")

    values = [to_payoff(assignment[name]) for name in partition.names]
    n = partition.shape.n_players
    rows = tuple(
        tuple(values[partition.class_of[index * n + player]] for player in range(n))
        for index in range(partition.shape.num_profiles)
    )
    return Game(partition.shape, rows)


def refinement_bijection(p1: CellPartition, p2: CellPartition) -> GameBijection | None:
    """A bijection h sending every class of p1 into a single class of p2.

    With such an h, any values on p2 pull back along h to values on p1 that
    are constant on p1's classes, giving an isomorphic instance. Pairwise
    distinct values on p2 are the hardest case and equal values only merge
    classes, so the existence of h decides p1 <= p2 for every choice.
    """
    if p1.shape.n_players != p2.shape.n_players or sorted(p1.shape.counts) != sorted(p2.shape.counts):
        raise ShapeMismatchError(
            f"Cannot compare partitions over shapes {list(p1.shape.counts)} and {list(p2.shape.counts)}."
        )
    n = p1.shape.n_players
    profiles = list(p1.shape.profiles())
    for h in enumerate_bijections(p1.shape, p2.shape):
        image_class: dict[int, int] = {}
        consistent = True
        for index, profile in enumerate(profiles):
            for player in range(n):
                source_class = p1.class_of[index * n + player]
                target_class = p2.class_of[_cell_image(h, player, profile)]
                if image_class.setdefault(source_class, target_class) != target_class:
                    consistent = False
                    break
            if not consistent:
                break
        if consistent:
            return h
    return None


def param_leq(p1: CellPartition, p2: CellPartition) -> bool:
    return refinement_bijection(p1, p2) is not None


@dataclass(frozen=True, slots=True)
class HasseNode:
    name: str
    members: tuple[str, ...]
    height: int

    @property
    def label(self) -> str:
        return " = ".join(self.members)


@dataclass(frozen=True, slots=True)
class HasseDiagram:
    """Cover relation of <=; edges run from the lower node to the upper one."""

    nodes: tuple[HasseNode, ...]
    edges: tuple[tuple[str, str], ...]


def hasse(partitions: Sequence[tuple[str, CellPartition]]) -> HasseDiagram:
    started = perf_counter()
    count = len(partitions)
    leq = [[param_leq(partitions[a][1], partitions[b][1]) for b in range(count)] for a in range(count)]

    representatives: list[int] = []
    members: dict[int, list[str]] = {}
    for position, (name, _) in enumerate(partitions):
        for rep in representatives:
            if leq[rep][position] and leq[position][rep]:
                members[rep].append(name)
                break
        else:
            representatives.append(position)
            members[position] = [name]

    graph = nx.DiGraph()
    graph.add_nodes_from(representatives)
    for lower in representatives:
        for upper in representatives:
            if lower != upper and leq[lower][upper]:
                graph.add_edge(lower, upper)
    reduced = nx.transitive_reduction(graph)

    heights: dict[int, int] = {}
    for node in nx.topological_sort(reduced):
        heights[node] = max((heights[pred] + 1 for pred in reduced.predecessors(node)), default=0)

    nodes = tuple(
        HasseNode(name=partitions[rep][0], members=tuple(members[rep]), height=heights[rep])
        for rep in representatives
    )
    edges = tuple(
        sorted((partitions[lower][0], partitions[upper][0]) for lower, upper in reduced.edges())
    )
    logger.info(
        "hasse_built inputs=%s nodes=%s edges=%s duration_ms=%s",
        count,
        len(nodes),
        len(edges),
        int((perf_counter() - started) * 1000),
    )
    return HasseDiagram(nodes=nodes, edges=edges)


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(diagram: HasseDiagram, name: str = "hasse") -> str:
    lines = [f"digraph {_quote(name)} {{", "  rankdir=BT;", "  edge [dir=none];"]
    for node in diagram.nodes:
        lines.append(f"  {_quote(node.name)} [label={_quote(node.label)}];")
    for height in sorted({node.height for node in diagram.nodes}):
        same = " ".join(f"{_quote(node.name)};" for node in diagram.nodes if node.height == height)
        lines.append(f"  {{ rank=same; {same} }}")
    for lower, upper in diagram.edges:
        lines.append(f"  {_quote(lower)} -> {_quote(upper)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
