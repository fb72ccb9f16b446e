import json
import unittest
from io import StringIO
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError

from singularity import cli
from singularity.exceptions import CheckFailure


def run(*argv):
    out, err = StringIO(), StringIO()
    code = cli.run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


class TestSingkCommand(unittest.TestCase):
    def test_ksg_json(self):
        out = StringIO()
        call_command("singk", "ksg", "--cyclic", "3:1,1,1", "--json", stdout=out)
        data = json.loads(out.getvalue())
        self.assertEqual(data["ksg0"]["invariant_factors"], [3, 3])
        self.assertEqual(data["g0"]["free_rank"], 1)

    def test_ksg_text(self):
        code, out, _ = run("ksg", "--preset", "D_5", "--checks")
        self.assertEqual(code, 0)
        self.assertIn("Z/4", out)
        self.assertIn("surface_ksg0_is_cl", out)

    def test_non_free_model_is_not_an_error(self):
        code, out, _ = run("ksg", "--cyclic", "4:1,2", "--json")
        self.assertEqual(code, 0)
        self.assertIsNone(json.loads(out)["ksg0"])

    def test_koszul_shows_class_values_and_coordinates(self):
        code, out, _ = run("koszul", "--preset", "D_4", "--json")
        self.assertEqual(code, 0)
        data = json.loads(out)
        self.assertEqual(len(data["koszul"]["coords"]), 5)
        values = data["class_function"]["values"]
        orders = [c["representative_order"] for c in data["table"]["classes"]]
        self.assertEqual(len(values), len(orders))
        # r(g) = det(1 - g^-1): 0 at the identity, 4 at -1
        self.assertTrue(all(num == "0" for num, _ in values[0]["coeffs"]))
        central = values[orders.index(2)]["coeffs"]
        self.assertEqual(central[0], ["4", "1"])
        self.assertTrue(all(num == "0" for num, _ in central[1:]))

        code, out, _ = run("koszul", "--preset", "D_4")
        self.assertEqual(code, 0)
        self.assertIn("coefficient of r", out)
        self.assertIn("r(g)", out)

    def test_group_and_tables(self):
        for argv in (["group", "--preset", "E_6"], ["group", "--list-presets"], ["chartab", "--preset", "D_4"],
                     ["koszul", "--preset", "D_4", "--matrix"], ["cl", "--cyclic", "6:1,3"], ["ade", "--threefolds"],
                     ["odp", "--dim", "5"], ["knorrer", "--chain", "2", "--base", "xy"]):
            code, out, err = run(*argv)
            self.assertEqual(code, 0, f"{argv}: {err}")
            self.assertTrue(out.strip())

    def test_ade_curves_json(self):
        code, out, _ = run("ade", "--json")
        self.assertEqual(code, 0)
        rows = {row["label"]: row for row in json.loads(out)}
        self.assertEqual(rows["E_8"]["ksg1"], "k^4")
        self.assertEqual(rows["D_6"]["ksg0"]["free_rank"], 2)

    def test_wps(self):
        code, out, _ = run("wps", "--weights", "1,2,3", "--json")
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["kksg0"]["invariant_factors"], [6])

    def test_assemble(self):
        code, out, _ = run("assemble", "--dim", "2", "--model", "cyclic:3:1,2", "--model", "preset:D_4", "--checks")
        self.assertEqual(code, 0)
        self.assertIn("surface_kksg0_is_cl_sum", out)

    def test_order_law(self):
        code, out, _ = run("selftest", "--order-law", "--json")
        self.assertEqual(code, 0)
        self.assertEqual(len(json.loads(out)["rows"]), 40)


class TestExitCodes(unittest.TestCase):
    def test_usage_errors(self):
        for argv in (["ksg"], ["ksg", "--cyclic", "3:1,5"], ["wps", "--weights", "2,4"],
                     ["ksg", "--preset", "B_2"], ["knorrer", "--base", "eps"]):
            code, _, err = run(*argv)
            self.assertEqual(code, 2, argv)
            self.assertTrue(err.strip())

    def test_usage_error_in_json_mode(self):
        code, out, err = run("ksg", "--preset", "B_2", "--json")
        self.assertEqual(code, 2)
        self.assertEqual(out, "")
        payload = json.loads(err)
        self.assertEqual(payload["status"], "Error")
        self.assertEqual(payload["code"], "invalid_label")

    def test_check_failure(self):
        with mock.patch("singularity.api.compute_ksg", side_effect=CheckFailure("broken invariant")):
            code, _, err = run("ksg", "--cyclic", "3:1,2", "--json")
        self.assertEqual(code, 3)
        self.assertEqual(json.loads(err)["code"], "check_failure")
        with mock.patch("singularity.api.compute_ksg", side_effect=CheckFailure("broken invariant")):
            with self.assertRaises(CommandError) as ctx:
                call_command("singk", "ksg", "--cyclic", "3:1,2", stdout=StringIO(), stderr=StringIO())
        self.assertEqual(ctx.exception.returncode, 3)

    def test_run_config(self):
        config = cli.RunConfig.from_options({"json": True, "max_order": None, "seed": 7})
        self.assertEqual(config.output_mode.value, "json")
        self.assertEqual(config.seed, 7)
        self.assertGreater(config.max_order, 0)


if __name__ == '__main__':
    unittest.main()
