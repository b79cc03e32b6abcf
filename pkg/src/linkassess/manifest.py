"""Dataset manifests and dataset summaries.

A manifest is an INI file::

    [dataset]
    name = research-group
    sn = facebook
    directed = false

    [defaults]
    model = svm_rbf
    kfold = 10
    seed = 7

    [network:facebook]
    path = facebook.edges

    [network:work]
    path = work.edges

Edge-list paths are resolved relative to the manifest. A network section may
override ``directed``; all networks must agree.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from .experiments import Dataset
from .graph import Network, avg_clustering, density, edge_overlap, load_edge_list


class ManifestError(ValueError):
    pass


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _bool(value: str, where: str) -> bool:
    v = value.strip().lower()
    if v in _TRUE:
        return True
    if v in _FALSE:
        return False
    raise ManifestError(f"{where}: expected a boolean, got {value!r}")


@dataclass(frozen=True)
class NetworkDescriptor:
    id: str
    path: Path
    directed: bool


@dataclass
class DatasetManifest:
    name: str
    sn: NetworkDescriptor
    exogenous: list[NetworkDescriptor]
    defaults: dict = field(default_factory=dict)
    path: Path | None = None
    networks: dict[str, Network] = field(default_factory=dict)

    @property
    def dataset(self) -> Dataset:
        return Dataset(self.name, self.networks[self.sn.id],
                       tuple(self.networks[d.id] for d in self.exogenous))

    @property
    def descriptors(self) -> list[NetworkDescriptor]:
        return [self.sn, *self.exogenous]


def load_manifest(path) -> DatasetManifest:
    path = Path(path)
    if not path.is_file():
        raise ManifestError(f"manifest {path} does not exist")
    parser = configparser.ConfigParser(interpolation=None, strict=True,
                                       inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(path.read_text(encoding="utf-8"), source=str(path))
    except configparser.Error as exc:
        raise ManifestError(f"{path}: {exc}") from exc
    if not parser.has_section("dataset"):
        raise ManifestError(f"{path}: missing [dataset] section")
    ds = parser["dataset"]
    name = ds.get("name", path.stem)
    sn_id = ds.get("sn")
    if not sn_id:
        raise ManifestError(f"{path}: [dataset] must name the social network with sn = <id>")
    default_directed = _bool(ds.get("directed", "false"), f"{path} [dataset] directed")

    descriptors = []
    seen = set()
    for section in parser.sections():
        if not section.startswith("network:"):
            if section not in ("dataset", "defaults"):
                raise ManifestError(f"{path}: unknown section [{section}]")
            continue
        nid = section.split(":", 1)[1].strip()
        if not nid:
            raise ManifestError(f"{path}: empty network id in [{section}]")
        if nid in seen:
            raise ManifestError(f"{path}: duplicate network id {nid!r}")
        seen.add(nid)
        sec = parser[section]
        if "path" not in sec:
            raise ManifestError(f"{path}: [{section}] lacks path")
        edge_path = (path.parent / sec["path"]).resolve()
        directed = _bool(sec.get("directed", str(default_directed)), f"{path} [{section}] directed")
        descriptors.append(NetworkDescriptor(nid, edge_path, directed))

    if len({d.directed for d in descriptors}) > 1:
        raise ManifestError(f"{path}: networks mix directed and undirected edges")
    sn = [d for d in descriptors if d.id == sn_id]
    if not sn:
        raise ManifestError(f"{path}: social network {sn_id!r} has no [network:{sn_id}] section")
    exogenous = [d for d in descriptors if d.id != sn_id]

    defaults = dict(parser["defaults"]) if parser.has_section("defaults") else {}
    manifest = DatasetManifest(name, sn[0], exogenous, defaults, path)
    for d in manifest.descriptors:
        if not d.path.is_file():
            raise ManifestError(f"{path}: edge list {d.path} for {d.id!r} does not exist")
        manifest.networks[d.id] = load_edge_list(d.path, d.directed, d.id)
    return manifest


def write_manifest(path, name: str, sn_id: str, files: dict[str, str], directed: bool = False,
                   defaults: dict | None = None) -> None:
    lines = ["[dataset]", f"name = {name}", f"sn = {sn_id}",
             f"directed = {'true' if directed else 'false'}", ""]
    if defaults:
        lines.append("[defaults]")
        lines += [f"{k} = {v}" for k, v in defaults.items()]
        lines.append("")
    for nid, file in files.items():
        lines += [f"[network:{nid}]", f"path = {file}", ""]
    Path(path).write_text("\n".join(lines), encoding="utf-8")


def summarize(manifest: DatasetManifest) -> list[dict]:
    """Per-network n, m, clustering, density and edge overlap with the social network."""
    sn = manifest.networks[manifest.sn.id]
    rows = []
    for d in manifest.descriptors:
        g = manifest.networks[d.id]
        rows.append({
            "network": g.id,
            "role": "sn" if g is sn else "exogenous",
            "directed": g.directed,
            "n": g.n,
            "m": g.m,
            "avg_clustering": avg_clustering(g),
            "density": density(g),
            "overlap_with_sn": edge_overlap(g, sn),
        })
    return rows
