"""Readers and writers for attributed graph files.

Two layouts are understood:

* the citation-dataset layout: a whitespace separated ``content`` file with
  ``node_id f_1 .. f_D class`` rows and a two-column ``cites`` file;
* CSV files with a header row (features: ``node_id`` + D columns, edges:
  ``src,dst``, labels: ``node_id,class``).

An edge path ending in ``.npz`` is read as an explicit scipy sparse adjacency.
"""

from __future__ import annotations

import csv
import logging
from contextlib import closing
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp

from modules.graph.types import AttributedGraph
from utils.errors import GraphFormatError, GraphValidationError, ValidationError


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class GraphLoader:
    """Load graphs from disk, choosing the parser by file suffix."""

    def __init__(self, *, drop_dangling: bool = False) -> None:
        self.drop_dangling = drop_dangling

    def load(
        self,
        features_path: PathLike,
        edges_path: PathLike,
        labels_path: Optional[PathLike] = None,
    ) -> AttributedGraph:
        features_path = _existing(features_path, "features")
        edges_path = _existing(edges_path, "edges")
        labels_file = _existing(labels_path, "labels") if labels_path is not None else None

        if features_path.suffix.lower() == ".csv":
            node_names, features, raw_labels = _read_feature_csv(features_path)
        else:
            node_names, features, raw_labels = _read_content(features_path)

        if labels_file is not None:
            raw_labels = _read_labels(labels_file, node_names)

        labels, class_names = _encode_labels(raw_labels)
        index = {name: position for position, name in enumerate(node_names)}

        if edges_path.suffix.lower() == ".npz":
            adjacency = sp.load_npz(edges_path)
            logger.debug("Loaded explicit adjacency %s from %s", adjacency.shape, edges_path)
            graph = AttributedGraph.from_arrays(
                features,
                adjacency,
                labels=labels,
                class_names=class_names,
                node_names=node_names,
            )
        else:
            edges = self._read_edges(edges_path, index)
            graph = AttributedGraph.from_edges(
                features,
                edges,
                labels=labels,
                class_names=class_names,
                node_names=node_names,
            )

        logger.info(
            "Loaded graph N=%s M=%s D=%s classes=%s",
            graph.num_nodes,
            graph.num_edges,
            graph.num_features,
            len(graph.class_names),
            extra={"features_path": str(features_path), "edges_path": str(edges_path)},
        )
        return graph

    def _read_edges(self, path: Path, index: Dict[str, int]) -> List[Tuple[int, int]]:
        edges: List[Tuple[int, int]] = []
        dangling = 0
        self_loops = 0
        for line_no, (source, target) in _iter_edge_rows(path):
            if source not in index or target not in index:
                missing = source if source not in index else target
                if not self.drop_dangling:
                    raise GraphValidationError(
                        f"{path}:{line_no}: edge references undeclared node id '{missing}'"
                    )
                dangling += 1
                continue
            if source == target:
                self_loops += 1
                continue
            edges.append((index[source], index[target]))

        if dangling:
            logger.warning("Dropped %s edges with undeclared endpoints from %s", dangling, path)
        if self_loops:
            logger.warning("Dropped %s self-loop rows from %s", self_loops, path)
        return edges


def load_graph(
    features_path: PathLike,
    edges_path: PathLike,
    labels_path: Optional[PathLike] = None,
    *,
    drop_dangling: bool = False,
) -> AttributedGraph:
    """Load and validate an attributed graph."""

    return GraphLoader(drop_dangling=drop_dangling).load(features_path, edges_path, labels_path)


def save_content_files(graph: AttributedGraph, directory: PathLike, name: str = "graph") -> Tuple[Path, Path]:
    """Write ``<name>.content`` and ``<name>.cites`` in the citation layout."""

    if not graph.has_labels:
        raise GraphValidationError("content files require node labels")
    target = Path(directory)
    target.mkdir(parents=True, exist_ok=True)
    content_path = target / f"{name}.content"
    cites_path = target / f"{name}.cites"

    with content_path.open("w", encoding="utf-8") as handle:
        for node in range(graph.num_nodes):
            values = "\t".join(repr(float(value)) for value in graph.features[node])
            label = graph.class_names[int(graph.labels[node])]
            handle.write(f"{graph.node_name(node)}\t{values}\t{label}\n")

    upper = sp.triu(graph.adjacency, k=1).tocoo()
    with cites_path.open("w", encoding="utf-8") as handle:
        for source, target_node in sorted(zip(upper.row.tolist(), upper.col.tolist())):
            handle.write(f"{graph.node_name(source)}\t{graph.node_name(target_node)}\n")

    logger.debug("Wrote %s and %s", content_path, cites_path)
    return content_path, cites_path


def _existing(path: PathLike, role: str) -> Path:
    resolved = Path(path)
    if not resolved.is_file():
        raise ValidationError(f"{role} file not found: {resolved}")
    return resolved


def _decoded_lines(path: Path) -> Iterator[str]:
    with path.open("rb") as handle:
        for line_no, raw in enumerate(handle, start=1):
            try:
                yield raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise GraphFormatError(
                    str(path), line_no, f"not valid UTF-8 (byte {exc.object[exc.start]:#04x})"
                ) from None


def _read_content(path: Path) -> Tuple[List[str], np.ndarray, List[str]]:
    node_names: List[str] = []
    rows: List[np.ndarray] = []
    raw_labels: List[str] = []
    width: Optional[int] = None
    seen: set[str] = set()

    for line_no, line in enumerate(_decoded_lines(path), start=1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) < 3:
            raise GraphFormatError(str(path), line_no, "expected node id, features and a class label")
        if width is None:
            width = len(parts)
        elif len(parts) != width:
            raise GraphFormatError(
                str(path), line_no, f"expected {width} columns, found {len(parts)}"
            )
        name = parts[0]
        if name in seen:
            raise GraphFormatError(str(path), line_no, f"duplicate node id '{name}'")
        seen.add(name)
        rows.append(_parse_floats(parts[1:-1], path, line_no))
        node_names.append(name)
        raw_labels.append(parts[-1])

    if not rows:
        raise GraphFormatError(str(path), None, "no node rows found")
    return node_names, np.vstack(rows), raw_labels


def _read_feature_csv(path: Path) -> Tuple[List[str], np.ndarray, List[str]]:
    node_names: List[str] = []
    rows: List[np.ndarray] = []
    seen: set[str] = set()

    with closing(_decoded_lines(path)) as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if not header or len(header) < 2:
            raise GraphFormatError(str(path), 1, "header must be node_id followed by feature columns")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise GraphFormatError(
                    str(path), line_no, f"expected {len(header)} columns, found {len(row)}"
                )
            name = row[0].strip()
            if name in seen:
                raise GraphFormatError(str(path), line_no, f"duplicate node id '{name}'")
            seen.add(name)
            node_names.append(name)
            rows.append(_parse_floats(row[1:], path, line_no))

    if not rows:
        raise GraphFormatError(str(path), None, "no node rows found")
    return node_names, np.vstack(rows), []


def _read_labels(path: Path, node_names: Sequence[str]) -> List[str]:
    by_name: Dict[str, str] = {}
    is_csv = path.suffix.lower() == ".csv"
    with closing(_decoded_lines(path)) as handle:
        rows = csv.reader(handle) if is_csv else (line.split() for line in handle)
        for line_no, row in enumerate(rows, start=1):
            if is_csv and line_no == 1:
                continue
            if not row:
                continue
            if len(row) != 2:
                raise GraphFormatError(str(path), line_no, "expected node_id and class columns")
            by_name[row[0].strip()] = row[1].strip()

    missing = [name for name in node_names if name not in by_name]
    if missing:
        raise GraphValidationError(f"{path}: no label for node id '{missing[0]}'")
    return [by_name[name] for name in node_names]


def _iter_edge_rows(path: Path):
    is_csv = path.suffix.lower() == ".csv"
    with closing(_decoded_lines(path)) as handle:
        rows = csv.reader(handle) if is_csv else (line.split() for line in handle)
        for line_no, row in enumerate(rows, start=1):
            if is_csv and line_no == 1:
                continue
            if not row:
                continue
            if len(row) != 2:
                raise GraphFormatError(str(path), line_no, f"expected 2 columns, found {len(row)}")
            yield line_no, (row[0].strip(), row[1].strip())


def _parse_floats(values: Sequence[str], path: Path, line_no: int) -> np.ndarray:
    try:
        return np.array([float(value) for value in values], dtype=np.float64)
    except ValueError as exc:
        raise GraphFormatError(str(path), line_no, f"non-numeric feature value ({exc})") from None


def _encode_labels(raw_labels: Sequence[str]) -> Tuple[Optional[np.ndarray], Tuple[str, ...]]:
    if not raw_labels:
        return None, ()
    class_names = tuple(sorted(set(raw_labels)))
    lookup = {name: code for code, name in enumerate(class_names)}
    return np.array([lookup[name] for name in raw_labels], dtype=np.int64), class_names


__all__ = ["GraphLoader", "load_graph", "save_content_files"]
