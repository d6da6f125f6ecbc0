import json

import pytest

from tilepump.errors import InstanceError, InvalidPath, UnknownTile, UnstableSeed
from tilepump.instances import (
    FIXTURE_NAMES,
    fixture_text,
    instance_from_system,
    load_fixture,
    parse_instance,
    serialize_instance,
)


class TestParse:
    def test_all_fixtures_parse(self):
        for name in FIXTURE_NAMES:
            tas, path = load_fixture(name)
            assert len(tas.tileset) >= 1

    def test_round_trip_identity_on_fixtures(self):
        for name in FIXTURE_NAMES:
            inst = parse_instance(fixture_text(name))
            again = parse_instance(serialize_instance(inst))
            assert serialize_instance(again) == serialize_instance(inst)
            assert instance_from_system(*inst.to_system()).tileset == inst.tileset

    def test_unknown_tile(self):
        doc = json.loads(fixture_text("COL-N"))
        doc["path"][0]["tile"] = "zz"
        with pytest.raises(UnknownTile) as err:
            parse_instance(json.dumps(doc))
        assert err.value.name == "zz"
        assert "path[0]" in err.value.field

    def test_non_adjacent_path(self):
        doc = json.loads(fixture_text("COL-N"))
        doc["path"][1]["y"] = 4
        with pytest.raises(InvalidPath) as err:
            parse_instance(json.dumps(doc))
        assert err.value.step == 2  # (0,1) then (0,4): adjacency break

    def test_unstable_seed(self):
        doc = json.loads(fixture_text("COL-N"))
        doc["seed"].append({"x": 1, "y": 0, "tile": "t"})  # east side inert
        with pytest.raises(UnstableSeed):
            parse_instance(json.dumps(doc))

    def test_syntax_error_diagnostic(self):
        with pytest.raises(InstanceError) as err:
            parse_instance("{nope")
        assert err.value.field == "$"

    def test_missing_field_path(self):
        with pytest.raises(InstanceError) as err:
            parse_instance(json.dumps({"tileset": [{"name": "t"}], "seed": []}))
        assert "tileset[0]" in err.value.field

    def test_bad_glue_shape(self):
        doc = json.loads(fixture_text("COL-N"))
        doc["tileset"][0]["north"] = ["a"]
        with pytest.raises(InstanceError) as err:
            parse_instance(json.dumps(doc))
        assert "north" in err.value.field
