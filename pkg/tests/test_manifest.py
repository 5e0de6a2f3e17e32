import pytest

from flickerband.compositor import SamplerRanges, sample_spec
from flickerband.errors import ConfigError
from flickerband.manifest import (clip_manifest, dump_kv, dump_manifest, parse_kv,
                                  parse_manifest, spec_from_manifest)
from flickerband.rng import derive_rng


class TestKvText:
    def test_scalars_round_trip(self):
        data = {"a": 1, "b": -2.5, "c": "hello", "d": True, "e": False, "f": None,
                "g": 0.1 + 0.2}
        assert parse_kv(dump_kv(data)) == data

    def test_float_repr_is_exact(self):
        value = 0.6352462871955684
        parsed = parse_kv(dump_kv({"x": value}))
        assert parsed["x"] == value

    def test_nesting_and_lists(self):
        data = {"top": {"mid": {"leaf": 3}, "nums": [1, 2.5, -3]},
                "empty": [], "words": ["a", "b"]}
        assert parse_kv(dump_kv(data)) == data

    def test_numeric_looking_strings_survive(self):
        # a hex hash that would parse as a float must round-trip as a string
        data = {"hash": "123e45", "word": "nan", "plain": "deadbeef"}
        assert parse_kv(dump_kv(data)) == data

    def test_comments_and_blanks_ignored(self):
        text = "# header\n\na: 1\n  # not here\nb: 2\n"
        assert parse_kv(text) == {"a": 1, "b": 2}

    def test_duplicate_key_rejected(self):
        with pytest.raises(ConfigError):
            parse_kv("a: 1\na: 2\n")

    def test_bad_indent_rejected(self):
        with pytest.raises(ConfigError):
            parse_kv("a: 1\n   b: 2\n")
        with pytest.raises(ConfigError):
            parse_kv("a: 1\n    b: 2\n")

    def test_missing_colon_rejected(self):
        with pytest.raises(ConfigError):
            parse_kv("just some text\n")

    def test_unrepresentable_string_rejected(self):
        with pytest.raises(ConfigError):
            dump_kv({"a": "has:colon"})


class TestClipManifest:
    def sample(self, seed=17):
        return sample_spec(SamplerRanges(frame_count=2), derive_rng(seed, "m"), 60, 40)

    def test_round_trip_equality(self):
        spec = self.sample()
        text = dump_manifest(clip_manifest(spec, 60, 40, "0.1.0", ["ab" * 32]))
        back, width, height = spec_from_manifest(parse_manifest(text))
        assert back == spec
        assert (width, height) == (60, 40)

    def test_round_trip_all_kinds(self):
        # keep drawing until every kind appeared in some slot
        seen = set()
        for seed in range(60):
            spec = self.sample(seed)
            seen.add(spec.base.kind)
            seen.add(spec.thick.kind)
            text = dump_manifest(clip_manifest(spec, 60, 40, "0.1.0", []))
            assert spec_from_manifest(parse_manifest(text))[0] == spec
            if len(seen) == 5:
                break
        assert len(seen) == 5

    def test_records_input_hashes(self):
        spec = self.sample()
        record = clip_manifest(spec, 60, 40, "0.1.0", ["00ff", "11aa"])
        parsed = parse_manifest(dump_manifest(record))
        assert parsed["input_hashes"] == ["00ff", "11aa"]

    def test_wrong_format_rejected(self):
        with pytest.raises(ConfigError):
            spec_from_manifest({"format": "something-else", "version": 1})

    def test_wrong_version_rejected(self):
        spec = self.sample()
        record = clip_manifest(spec, 60, 40, "0.1.0", [])
        record["version"] = 99
        with pytest.raises(ConfigError):
            spec_from_manifest(record)

    def test_no_thick_layer(self):
        spec = self.sample()
        solo = type(spec)(base=spec.base, thick=None, intensity=spec.intensity,
                          seed=spec.seed, frame_count=spec.frame_count)
        text = dump_manifest(clip_manifest(solo, 60, 40, "0.1.0", []))
        back, _, _ = spec_from_manifest(parse_manifest(text))
        assert back.thick is None
        assert back == solo
