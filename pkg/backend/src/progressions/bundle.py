"""
Certificate bundles: the objects a progression claim quantifies over, written to one directory.

    presentation.txt          the order presentation
    notation.json             g(x) with its shape, decimal value, element, depth and ordinal
    instances/<name>.txt      schema instances, zstandard-compressed above COMPRESS_ABOVE bytes
    manifest.json             SHA-256 of every file above
"""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import zstandard as zstd

from src.errors import CertificateError
from src.logic.formula import Formula, to_text
from src.logic.grammar import parse
from src.ordinals import CnfOrdinal
from src.orders.presentation import OrderPresentation
from src.progressions.notations import NotationTerm
from src.utils.console import log

BUNDLE_VERSION = 1
COMPRESS_ABOVE = 64 * 1024


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


@dataclass
class CertificateBundle:
    presentation: OrderPresentation
    notation: Optional[NotationTerm] = None
    ordinal: Optional[CnfOrdinal] = None
    element: Optional[int] = None
    depth: int = 8
    instances: Dict[str, str] = field(default_factory=dict)

    def add_instance(self, name: str, instance) -> "CertificateBundle":
        self.instances[name] = instance if isinstance(instance, str) else to_text(instance)
        return self

    def _files(self) -> Dict[str, bytes]:
        files = {"presentation.txt": (self.presentation.to_text() + "\n").encode("utf-8")}
        if self.notation is not None:
            notation = self.notation.to_dict()
            notation["ordinal"] = None if self.ordinal is None else str(self.ordinal)
            notation["element"] = self.element
            notation["depth"] = self.depth
            files["notation.json"] = json.dumps(notation, indent=1, sort_keys=True).encode("utf-8")
        for name, text in sorted(self.instances.items()):
            data = (text + "\n").encode("utf-8")
            if len(data) > COMPRESS_ABOVE:
                files[f"instances/{name}.txt.zst"] = zstd.ZstdCompressor(level=10).compress(data)
            else:
                files[f"instances/{name}.txt"] = data
        return files

    def write(self, directory: str) -> str:
        """Write every file and the manifest; returns the manifest path."""
        files = self._files()
        for relative, data in files.items():
            path = os.path.join(directory, relative)
            os.makedirs(os.path.dirname(path), exist_ok=True)
            with open(path, "wb") as handle:
                handle.write(data)
        manifest = {"version": BUNDLE_VERSION, "files": {name: _digest(data) for name, data in sorted(files.items())}}
        manifest_path = os.path.join(directory, "manifest.json")
        with open(manifest_path, "w", encoding="utf-8") as handle:
            json.dump(manifest, handle, indent=1, sort_keys=True)
        log("success", "Bundle", f"Wrote {len(files)} files to {directory}")
        return manifest_path


def verify_bundle(directory: str) -> List[str]:
    """
    Files whose content no longer matches the manifest, or that are missing.

    :raises CertificateError: when there is no readable manifest
    """
    path = os.path.join(directory, "manifest.json")
    try:
        with open(path, "r", encoding="utf-8") as handle:
            manifest = json.load(handle)
    except (OSError, ValueError) as exc:
        raise CertificateError(f"No readable manifest in {directory}", str(exc)) from None
    if manifest.get("version") != BUNDLE_VERSION:
        raise CertificateError(f"Unsupported bundle version {manifest.get('version')}")
    broken = []
    for name, digest in manifest["files"].items():
        try:
            with open(os.path.join(directory, name), "rb") as handle:
                data = handle.read()
        except OSError:
            broken.append(name)
            continue
        if _digest(data) != digest:
            broken.append(name)
    return broken


def read_instance(directory: str, name: str) -> str:
    base = os.path.join(directory, "instances", name + ".txt")
    if os.path.exists(base + ".zst"):
        with open(base + ".zst", "rb") as handle:
            return zstd.ZstdDecompressor().decompress(handle.read()).decode("utf-8").rstrip("\n")
    with open(base, "r", encoding="utf-8") as handle:
        return handle.read().rstrip("\n")


def instance_formula(directory: str, name: str) -> Formula:
    """Parse an instance back from a bundle."""
    return parse(read_instance(directory, name))
