import json
import shutil
import tempfile
import unittest
from pathlib import Path
from unittest import mock

from singularity.exceptions import InvalidLabel, PresetIntegrityError
from singularity.utils import presets
from singularity.utils.constants import ModelKind
from singularity.utils.geometric_tables import ade_surface_ksg0
from singularity.utils.local_singularity import local_invariants
from singularity.utils.presets import get_preset, load_preset_file, preset_catalog, preset_names


class TestPresets(unittest.TestCase):
    def test_names(self):
        names = preset_names(3, 5)
        self.assertEqual(names, ["A_1", "A_2", "A_3", "D_4", "D_5", "E_6", "E_7", "E_8"])

    def test_orders(self):
        expected = {"A_4": 5, "D_4": 8, "D_7": 20, "E_6": 24, "E_7": 48, "E_8": 120}
        for name, order in expected.items():
            model = get_preset(name).local_model()
            self.assertEqual(model.group_order, order, name)

    def test_cyclic_presets(self):
        preset = get_preset("A3")
        self.assertEqual(preset.kind, ModelKind.CYCLIC_WEIGHTS)
        self.assertEqual((preset.modulus, preset.weights), (4, (1, 3)))
        self.assertEqual(preset.to_json_object()["weights"], [1, 3])

    def test_surface_groups_match_the_table(self):
        for preset in preset_catalog(max_a=5, max_d=7):
            inv = local_invariants(preset.local_model())
            self.assertEqual(inv.ksg0, ade_surface_ksg0(preset.ade_label), preset.name)
            self.assertEqual(inv.ksg0, inv.cl, preset.name)

    def test_unknown_preset(self):
        for name in ("F_4", "D_2", "E_9", "cyclic"):
            with self.assertRaises(InvalidLabel):
                get_preset(name)


class TestPresetIntegrity(unittest.TestCase):
    def setUp(self):
        self.directory = Path(tempfile.mkdtemp())
        for path in presets.PRESET_DATA_DIR.iterdir():
            shutil.copy(path, self.directory / path.name)
        self.addCleanup(shutil.rmtree, self.directory)

    def test_recorded_checksums_match(self):
        for filename in presets.EXCEPTIONAL_FILES.values():
            data = load_preset_file(filename)
            self.assertIn("generators", data)

    def test_tampered_file_is_rejected(self):
        filename = presets.EXCEPTIONAL_FILES[6]
        path = self.directory / filename
        data = json.loads(path.read_text(encoding='utf-8'))
        data["expected_order"] = 25
        path.write_text(json.dumps(data), encoding='utf-8')
        with mock.patch.object(presets, 'PRESET_DATA_DIR', self.directory):
            with self.assertRaises(PresetIntegrityError):
                load_preset_file(filename)
            with self.assertRaises(PresetIntegrityError):
                get_preset("E_6")

    def test_missing_checksum_is_rejected(self):
        (self.directory / presets.CHECKSUM_FILE).write_text("{}", encoding='utf-8')
        with mock.patch.object(presets, 'PRESET_DATA_DIR', self.directory):
            with self.assertRaises(PresetIntegrityError):
                load_preset_file(presets.EXCEPTIONAL_FILES[7])


if __name__ == '__main__':
    unittest.main()
