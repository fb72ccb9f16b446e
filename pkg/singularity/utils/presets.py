"""
Catalog of named local models: A_n as cyclic weights, D_n as binary dihedral
groups, and the exceptional binary polyhedral groups read from checksummed
data files.
"""
import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from singularity.exceptions import CheckFailure, InvalidLabel, PresetIntegrityError
from singularity.utils.constants import ModelKind
from singularity.utils.cyclotomic import CycNum
from singularity.utils.geometric_tables import parse_ade_label
from singularity.utils.local_singularity import LocalModel
from singularity.utils.matrix_group import DEFAULT_DENSE_TABLE_LIMIT, DEFAULT_MAX_ORDER, close_group, generators_from_json_object

logger = logging.getLogger(__name__)

PRESET_DATA_DIR = Path(__file__).resolve().parent / 'preset_data'
CHECKSUM_FILE = 'checksums.json'
EXCEPTIONAL_FILES = {
    6: 'e6_binary_tetrahedral.json',
    7: 'e7_binary_octahedral.json',
    8: 'e8_binary_icosahedral.json',
}


@dataclass
class Preset:
    name: str
    description: str
    kind: ModelKind
    expected_order: int
    ade_label: Optional[str] = None
    conductor: Optional[int] = None
    generators: Optional[list] = None
    modulus: Optional[int] = None
    weights: tuple = ()

    def local_model(self, max_order=DEFAULT_MAX_ORDER, dense_table_limit=DEFAULT_DENSE_TABLE_LIMIT):
        """
        Builds the local model; matrix presets are closed and checked against their expected order.
        """
        if self.kind is ModelKind.CYCLIC_WEIGHTS:
            return LocalModel.cyclic(self.modulus, self.weights, label=self.name)
        group = close_group(self.generators, max_order=max_order, dense_table_limit=dense_table_limit)
        if group.order != self.expected_order:
            raise CheckFailure(f"Preset {self.name} closed to order {group.order}, expected {self.expected_order}")
        return LocalModel.from_group(group, label=self.name)

    def to_json_object(self):
        data = {
            "name": self.name,
            "description": self.description,
            "kind": self.kind.value,
            "expected_order": self.expected_order,
            "ade_label": self.ade_label,
        }
        if self.kind is ModelKind.CYCLIC_WEIGHTS:
            data["m"] = self.modulus
            data["weights"] = list(self.weights)
        else:
            data["conductor"] = self.conductor
        return data


def _read_checksums():
    with open(PRESET_DATA_DIR / CHECKSUM_FILE, 'r') as f:
        return json.load(f)


def load_preset_file(filename):
    """
    Reads a generator file after verifying its SHA-256 digest against the checksum manifest.

    Args:
        filename (str): File name inside the preset data directory
    """
    raw = (PRESET_DATA_DIR / filename).read_bytes()
    expected = _read_checksums().get(filename)
    actual = hashlib.sha256(raw).hexdigest()
    if expected is None or actual != expected:
        logger.error(f"Checksum mismatch for preset file {filename}: {actual}")
        raise PresetIntegrityError(f"Preset file {filename} does not match its recorded checksum")
    return json.loads(raw.decode('utf-8'))


def a_preset(n):
    """A_n: the cyclic quotient 1/(n+1)(1, n)."""
    return Preset(
        name=f"A_{n}",
        description=f"Cyclic group of order {n + 1} acting with weights (1, {n})",
        kind=ModelKind.CYCLIC_WEIGHTS,
        expected_order=n + 1,
        ade_label=f"A_{n}",
        modulus=n + 1,
        weights=(1, n),
    )


def d_preset(n):
    """D_n: binary dihedral group of order 4(n-2) generated by diag(zeta, zeta^-1) and [[0, 1], [-1, 0]]."""
    m = n - 2
    conductor = 2 * m
    zero, one = CycNum.zero(conductor), CycNum.one(conductor)
    rotation = ((CycNum.root_of_unity(conductor, 1), zero), (zero, CycNum.root_of_unity(conductor, -1)))
    swap = ((zero, one), (-one, zero))
    return Preset(
        name=f"D_{n}",
        description=f"Binary dihedral group of order {4 * m}",
        kind=ModelKind.MATRIX_GROUP,
        expected_order=4 * m,
        ade_label=f"D_{n}",
        conductor=conductor,
        generators=[rotation, swap],
    )


def e_preset(n):
    data = load_preset_file(EXCEPTIONAL_FILES[n])
    _, generators = generators_from_json_object(data)
    return Preset(
        name=data["ade_label"],
        description=data["description"],
        kind=ModelKind.MATRIX_GROUP,
        expected_order=int(data["expected_order"]),
        ade_label=data["ade_label"],
        conductor=int(data["conductor"]),
        generators=generators,
    )


def get_preset(name):
    """
    Looks up a preset by ADE name: A3, A_3, D_4, E6, E_8, ...
    """
    try:
        family, index = parse_ade_label(name)
    except InvalidLabel:
        raise InvalidLabel(f"Unknown preset {name!r}")
    if family == "A":
        return a_preset(index)
    if family == "D":
        return d_preset(index)
    return e_preset(index)


def preset_names(max_a=8, max_d=9):
    return [f"A_{n}" for n in range(1, max_a + 1)] + [f"D_{n}" for n in range(4, max_d + 1)] + ["E_6", "E_7", "E_8"]


def preset_catalog(max_a=8, max_d=9):
    return [get_preset(name) for name in preset_names(max_a, max_d)]
