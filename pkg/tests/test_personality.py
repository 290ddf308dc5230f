import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from crowdlens.errors import EmptyRegistryFactor, RegistryError, TraitUnavailable
from crowdlens.features import FeatureVector
from crowdlens.personality import (
    EMOTIONS,
    EmotionMappingTable,
    EmotionScores,
    OceanScores,
    SocialScores,
    SocialSurrogateParams,
    compare_pedestrians,
    emotion_contribution,
    emotions_from_ocean,
    ocean_from_items,
    polarity,
    socialization_level,
)
from crowdlens.registry import (
    FACTORS,
    compile_expression,
    default_registry,
    evaluate_item,
    make_item,
)


def vector(s=0.05, alpha=10.0, socialization=0.5, collectivity=0.5, x=(0.0, 0.0)):
    return FeatureVector(x=x, s=s, alpha=alpha, isolation=1.0 - socialization,
                         socialization=socialization, collectivity=collectivity)


unit = st.floats(0.0, 1.0, allow_nan=False)


class TestSocialization:
    def test_fully_isolated(self):
        scores = socialization_level(0.0, 10.0, 0)
        assert scores.socialization == pytest.approx(1 / (1 + math.exp(3)), abs=1e-12)
        assert scores.socialization == pytest.approx(0.0474, abs=5e-5)

    def test_fully_social(self):
        scores = socialization_level(1.0, 0.0, 10)
        assert scores.socialization == pytest.approx(1 / (1 + math.exp(-3)), abs=1e-12)
        assert scores.socialization == pytest.approx(0.9526, abs=5e-5)

    @given(unit, st.floats(0, 50), st.floats(0, 40))
    @settings(max_examples=200, deadline=None)
    def test_complement_exact(self, phi, dist, n):
        s = socialization_level(phi, dist, n)
        assert s.socialization + s.isolation == 1.0

    @given(unit, st.floats(0, 20), st.integers(0, 15),
           unit, st.floats(0, 20), st.integers(0, 15))
    @settings(max_examples=150, deadline=None)
    def test_monotone(self, p1, d1, n1, p2, d2, n2):
        lo = socialization_level(min(p1, p2), max(d1, d2), min(n1, n2))
        hi = socialization_level(max(p1, p2), min(d1, d2), max(n1, n2))
        assert hi.socialization >= lo.socialization - 1e-12

    def test_inputs_clamped(self):
        a = socialization_level(2.0, -5.0, 99)
        b = socialization_level(1.0, 0.0, 10)
        assert a.socialization == b.socialization

    def test_params_validation(self):
        with pytest.raises(ValueError):
            SocialSurrogateParams(d_max=0.0)
        with pytest.raises(ValueError):
            SocialSurrogateParams(n_cap=0)


class TestSocialScores:
    def test_complement_enforced(self):
        with pytest.raises(ValueError):
            SocialScores(socialization=0.7, isolation=0.4)

    @given(unit)
    @settings(max_examples=100, deadline=None)
    def test_from_socialization_always_valid(self, theta):
        s = SocialScores.from_socialization(theta)
        assert s.socialization + s.isolation == 1.0


class TestItems:
    def test_q1_evaluation(self):
        q1 = make_item(1, "C", "s + recip(alpha)")
        assert evaluate_item(q1, vector(s=0.04, alpha=2.0)) == pytest.approx(0.54)
        assert evaluate_item(q1, vector(s=0.0, alpha=1.0)) == pytest.approx(1.0)

    def test_epsilon_guard(self):
        q1 = make_item(1, "C", "s + recip(alpha)")
        assert evaluate_item(q1, vector(s=0.04, alpha=0.0)) == pytest.approx(1000.04)

    def test_division_guard(self):
        eq = make_item(9, "O", "1 / alpha")
        assert evaluate_item(eq, vector(alpha=0.0)) == pytest.approx(1000.0)

    def test_dsl_rejects_unknown_names(self):
        with pytest.raises(RegistryError):
            compile_expression("s + nonsense")
        with pytest.raises(RegistryError):
            compile_expression("__import__('os')")
        with pytest.raises(RegistryError):
            compile_expression("s ** 2")

    def test_dsl_fields_and_constants(self):
        f = compile_expression("(socialization + isolation) * 2 - 1")
        assert f(vector()) == pytest.approx(1.0)
        g = compile_expression("-alpha / 2")
        assert g(vector(alpha=10.0)) == pytest.approx(-5.0)

    def test_default_registry_covers_factors(self):
        factors = {it.factor for it in default_registry()}
        assert factors == set(FACTORS)


class TestOceanFromItems:
    def test_single_pedestrian_neutral(self):
        scores = ocean_from_items([vector()], default_registry())
        assert len(scores) == 1
        assert all(getattr(scores[0], f) == 0.5 for f in FACTORS)

    def test_minmax_endpoints(self):
        fast = vector(s=0.2, alpha=1.0)
        slow = vector(s=0.01, alpha=90.0)
        registry = [make_item(1, "C", "s + recip(alpha)"),
                    make_item(2, "O", "alpha"),
                    make_item(3, "E", "socialization"),
                    make_item(4, "A", "collectivity"),
                    make_item(5, "N", "isolation")]
        scores = ocean_from_items([fast, slow], registry)
        assert scores[0].C == 1.0 and scores[1].C == 0.0
        assert scores[0].O == 0.0 and scores[1].O == 1.0

    def test_missing_factor(self):
        with pytest.raises(EmptyRegistryFactor):
            ocean_from_items([vector()], [make_item(1, "C", "s")])

    @given(st.lists(st.floats(0.01, 10.0), min_size=2, max_size=6),
           st.floats(0.1, 5.0), st.floats(0.0, 3.0))
    @settings(max_examples=80, deadline=None)
    def test_affine_rescale_invariance(self, alphas, scale, shift):
        # positive-affine rescaling of one item's raw column must not move
        # the normalized scores
        assume(max(alphas) - min(alphas) > 1e-6)
        registry = [make_item(k, f, expr) for k, (f, expr) in enumerate(
            [("O", "alpha"), ("C", "s"), ("E", "socialization"),
             ("A", "collectivity"), ("N", "isolation")], start=1)]
        base = ocean_from_items([vector(alpha=a) for a in alphas], registry)
        scaled = ocean_from_items([vector(alpha=a * scale + shift) for a in alphas], registry)
        for b, s in zip(base, scaled):
            assert b.O == pytest.approx(s.O, abs=1e-9)


class TestEmotionTable:
    # (factor, polarity) -> [fear, happiness, sadness, anger]
    EXPECTED = {
        ("O", "+"): [0, 0, 0, -1],
        ("O", "-"): [0, 0, 0, 1],
        ("C", "+"): [-1, 0, 0, 0],
        ("C", "-"): [1, 0, 0, 0],
        ("E", "+"): [-1, 1, -1, -1],
        ("E", "-"): [1, 0, 0, 0],
        ("A", "+"): [0, 0, 0, -1],
        ("A", "-"): [0, 0, 0, 1],
        ("N", "+"): [1, -1, 1, 1],
        ("N", "-"): [-1, 1, -1, -1],
    }

    def test_all_forty_entries(self):
        table = EmotionMappingTable()
        for (factor, pol), row in self.EXPECTED.items():
            for emotion, expected in zip(EMOTIONS, row):
                assert emotion_contribution(table, factor, pol, emotion) == expected

    def test_spot_checks(self):
        table = EmotionMappingTable()
        assert emotion_contribution(table, "N", "+", "fear") == 1
        assert emotion_contribution(table, "E", "+", "happiness") == 1
        assert emotion_contribution(table, "O", "+", "fear") == 0

    def test_polarity_at_half_is_positive(self):
        assert polarity(0.5) == "+"
        assert polarity(0.49) == "-"

    def test_table_validation(self):
        with pytest.raises(ValueError):
            EmotionMappingTable(entries={("O", "+"): {"fear": 0}})


class TestEmotionsFromOcean:
    def test_neutral_profile(self):
        o = OceanScores(0.5, 0.5, 0.5, 0.5, 0.5)
        e = emotions_from_ocean(o)
        assert all(v == 0.5 for v in e.as_dict().values())

    def test_full_neuroticism(self):
        o = OceanScores(0.5, 0.5, 0.5, 0.5, 1.0)
        e = emotions_from_ocean(o)
        assert e.fear == pytest.approx(0.6)
        assert e.happiness == pytest.approx(0.4)
        assert e.sadness == pytest.approx(0.6)
        assert e.anger == pytest.approx(0.6)

    def test_full_extraversion(self):
        o = OceanScores(0.5, 0.5, 1.0, 0.5, 0.5)
        e = emotions_from_ocean(o)
        assert e.happiness == pytest.approx(0.6)
        assert e.fear == pytest.approx(0.4)
        assert e.sadness == pytest.approx(0.4)
        assert e.anger == pytest.approx(0.4)

    def test_neuroticism_sign_symmetry(self):
        hi = emotions_from_ocean(OceanScores(0.5, 0.5, 0.5, 0.5, 1.0))
        lo = emotions_from_ocean(OceanScores(0.5, 0.5, 0.5, 0.5, 0.0))
        for name in ("fear", "sadness", "anger"):
            assert hi.value(name) > 0.5 > lo.value(name)
        assert hi.happiness < 0.5 < lo.happiness

    @given(unit, unit, unit, unit, unit)
    @settings(max_examples=150, deadline=None)
    def test_scores_in_range(self, o, c, e, a, n):
        scores = emotions_from_ocean(OceanScores(o, c, e, a, n))
        for v in scores.as_dict().values():
            assert 0.0 <= v <= 1.0

    def test_dominant_label(self):
        e = EmotionScores(fear=0.2, happiness=0.9, sadness=0.1, anger=0.4)
        assert e.dominant() == "happiness"


class TestCompare:
    def traits(self, **kv):
        base = {t: 0.5 for t in ("O", "C", "E", "A", "N",
                                 "Fear", "Happiness", "Sadness", "Anger",
                                 "Socialization")}
        base.update(kv)
        return base

    def test_clear_winner(self):
        assert compare_pedestrians(self.traits(Anger=0.8), self.traits(Anger=0.3), "Anger") == "A"

    def test_tie_band(self):
        assert compare_pedestrians(self.traits(O=0.52), self.traits(O=0.50), "O") == "Tie"

    def test_both_band(self):
        assert compare_pedestrians(self.traits(E=0.9), self.traits(E=0.78), "E") == "Both"

    def test_neither_band(self):
        assert compare_pedestrians(self.traits(N=0.1), self.traits(N=0.2), "N") == "Neither"

    def test_unknown_trait(self):
        with pytest.raises(TraitUnavailable):
            compare_pedestrians(self.traits(), self.traits(), "Charisma")
        with pytest.raises(TraitUnavailable):
            compare_pedestrians({}, {}, "O")

    @given(unit, unit)
    @settings(max_examples=200, deadline=None)
    def test_antisymmetric(self, va, vb):
        a, b = self.traits(Fear=va), self.traits(Fear=vb)
        fwd = compare_pedestrians(a, b, "Fear")
        rev = compare_pedestrians(b, a, "Fear")
        assert rev == {"A": "B", "B": "A"}.get(fwd, fwd)
