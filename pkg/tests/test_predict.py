"""Prediction strategies: exact losses, set conversions, snooping curves."""

import math
import random
from fractions import Fraction

import pytest

from structlab.codec import BitString
from structlab.descsys import FiniteSet
from structlab.errors import FixtureError, StructLabError
from structlab.predict import (
    PredictionStrategy,
    StrategyCodebook,
    codebook_from_sets,
    evaluate_loss,
    format_codebook,
    format_strategy,
    parse_codebook,
    parse_strategy,
    set_to_strategy,
    snooping_curve,
    strategy_to_set,
)
from structlab.rational import log2_display
from structlab.structfn import profile

from .gensys import random_system
from .oracles import oracle_loss_product

B = BitString


def random_strategy(seed: int, n: int) -> PredictionStrategy:
    rng = random.Random(seed)
    table = {}
    for length in range(n):
        for v in range(1 << length):
            den = rng.randint(1, 12)
            table[B.from_value(length, v)] = Fraction(rng.randint(0, den), den)
    return PredictionStrategy(n, table)


# ---------------------------------------------------------------------------
# strategies and losses
# ---------------------------------------------------------------------------


def test_strategy_must_be_total():
    with pytest.raises(StructLabError, match="cover all"):
        PredictionStrategy(2, {"": Fraction(1, 2)})


def test_strategy_validation():
    with pytest.raises(StructLabError, match="horizon"):
        PredictionStrategy(0, {})
    with pytest.raises(StructLabError, match="shorter than the horizon"):
        PredictionStrategy(1, {"0": Fraction(1, 2)})
    with pytest.raises(StructLabError, match="lie in"):
        PredictionStrategy(1, {"": Fraction(3, 2)})


def test_uniform_strategy_loses_one_bit_per_step():
    p = PredictionStrategy.uniform(3)
    for v in range(8):
        rec = evaluate_loss(p, B.from_value(3, v))
        assert rec.product == Fraction(1, 8)
        assert rec.loss == pytest.approx(3.0)


def test_oracle_strategy_loses_nothing():
    x = B("101")
    table = {}
    for length in range(3):
        for v in range(1 << length):
            prefix = B.from_value(length, v)
            if x.startswith(prefix):
                table[prefix] = Fraction(x[length])
            else:
                table[prefix] = Fraction(1, 2)
    rec = evaluate_loss(PredictionStrategy(3, table), x)
    assert rec.product == 1
    assert rec.loss == 0


def test_loss_length_mismatch():
    with pytest.raises(StructLabError, match="horizon"):
        evaluate_loss(PredictionStrategy.uniform(3), "01")


def test_loss_matches_oracle_on_random_strategies():
    for seed in range(30):
        n = 1 + seed % 5
        strat = random_strategy(seed, n)
        table = dict(strat.items())
        for v in range(1 << n):
            x = B.from_value(n, v)
            assert evaluate_loss(strat, x).product == oracle_loss_product(table, x)


def test_products_always_sum_to_one():
    for seed in range(25):
        n = 1 + seed % 4
        assert random_strategy(seed, n).kraft_total() == 1
    assert PredictionStrategy.uniform(5).kraft_total() == 1
    assert set_to_strategy(FiniteSet(3, [0, 3, 5])).kraft_total() == 1


# ---------------------------------------------------------------------------
# sets as strategies
# ---------------------------------------------------------------------------


def test_proportions_of_a_three_element_set():
    strat = set_to_strategy(FiniteSet(2, ["00", "01", "10"]))
    assert strat.p("") == Fraction(1, 3)
    assert strat.p("0") == Fraction(1, 2)
    assert strat.p("1") == 0
    for member in ("00", "01", "10"):
        rec = evaluate_loss(strat, member)
        assert rec.product == Fraction(1, 3)
        assert rec.loss == pytest.approx(math.log2(3))
    outsider = evaluate_loss(strat, "11")
    assert outsider.product == 0
    assert outsider.loss == math.inf


def test_full_cube_predicts_uniformly():
    assert set_to_strategy(FiniteSet(3, range(8))) == PredictionStrategy.uniform(3)


def test_singleton_set_is_an_oracle():
    strat = set_to_strategy(FiniteSet(3, ["110"]))
    assert evaluate_loss(strat, "110").product == 1
    assert strat.p("0") == Fraction(1, 2)  # dead branch


def test_empty_set_has_no_strategy():
    with pytest.raises(StructLabError, match="empty set"):
        set_to_strategy(FiniteSet(2, []))


def test_member_products_on_random_sets():
    for seed in range(40):
        rng = random.Random(1000 + seed)
        n = rng.randint(1, 6)
        card = rng.randint(1, 1 << n)
        a = FiniteSet(n, rng.sample(range(1 << n), card))
        strat = set_to_strategy(a)
        for x in a.bitstrings():
            assert evaluate_loss(strat, x).product == Fraction(1, card)


# ---------------------------------------------------------------------------
# strategies as sets
# ---------------------------------------------------------------------------


def test_uniform_threshold_boundaries():
    p = PredictionStrategy.uniform(4)
    assert strategy_to_set(p, 4).cardinality == 16
    assert strategy_to_set(p, 3).cardinality == 0


def test_threshold_argument_validation():
    p = PredictionStrategy.uniform(2)
    with pytest.raises(StructLabError, match="exactly one"):
        strategy_to_set(p)
    with pytest.raises(StructLabError, match="exactly one"):
        strategy_to_set(p, 1, product_bound=Fraction(1, 2))
    with pytest.raises(StructLabError, match="nonnegative"):
        strategy_to_set(p, -1)
    with pytest.raises(StructLabError, match="product bound"):
        strategy_to_set(p, product_bound=Fraction(2))


def test_round_trip_recovers_the_set_exactly():
    # members carry product exactly 1/|A| and soak up the whole budget,
    # so thresholding at 1/|A| returns A itself
    for seed in range(40):
        rng = random.Random(seed)
        n = rng.randint(1, 10)
        card = rng.randint(1, 1 << n)
        a = FiniteSet(n, rng.sample(range(1 << n), card))
        back = strategy_to_set(set_to_strategy(a), product_bound=Fraction(1, card))
        assert back == a


def test_cardinality_bound_is_exact_for_every_strategy():
    for seed in range(40):
        n = 1 + seed % 5
        strat = random_strategy(2000 + seed, n)
        for m in range(n + 1):
            picked = strategy_to_set(strat, m)
            assert picked.cardinality <= 1 << m
            for x in picked.bitstrings():
                assert evaluate_loss(strat, x).product >= Fraction(1, 1 << m)


# ---------------------------------------------------------------------------
# codebooks and snooping curves
# ---------------------------------------------------------------------------


def test_codebook_validation():
    uniform = PredictionStrategy.uniform(2)
    with pytest.raises(StructLabError, match="at least one"):
        StrategyCodebook({})
    with pytest.raises(StructLabError, match="share one horizon"):
        StrategyCodebook({"0": uniform, "1": PredictionStrategy.uniform(3)})
    with pytest.raises(StructLabError, match="prefix"):
        StrategyCodebook({"0": uniform, "01": uniform})


def test_codebook_complexity_is_the_shortest_name():
    uniform = PredictionStrategy.uniform(2)
    book = StrategyCodebook({"0": uniform, "11": uniform})
    assert book.complexity(uniform) == 1
    assert book.complexity(PredictionStrategy.uniform(3)) == math.inf


def test_single_uniform_codebook_curve():
    book = StrategyCodebook({"0": PredictionStrategy.uniform(4)})
    curve = snooping_curve(book, "0110", alpha_max=2)
    assert curve.rows[0].product is None
    assert curve.rows[0].loss == math.inf
    assert curve.rows[1].loss == pytest.approx(4.0)
    assert curve.rows[2].witness == B("0")


def test_snooping_curve_input_validation():
    book = StrategyCodebook({"0": PredictionStrategy.uniform(4)})
    with pytest.raises(StructLabError, match="horizon"):
        snooping_curve(book, "01")
    with pytest.raises(StructLabError, match="alpha_max"):
        snooping_curve(book, "0110", alpha_max=-1)


def test_set_codebook_reference_curve(fixa):
    curve = snooping_curve(codebook_from_sets(fixa), "00")
    assert [row.product for row in curve.rows] == [
        None,
        Fraction(1, 4),
        Fraction(1, 2),
        Fraction(1),
    ]
    assert [row.witness for row in curve.rows] == [None, B("0"), B("10"), B("110")]
    assert curve.loss_values() == [math.inf, 2.0, 1.0, 0.0]
    assert curve.to_csv() == (
        "alpha,loss,witness_program\n"
        "0,inf,\n"
        "1,2,0\n"
        "2,1,10\n"
        "3,0,110\n"
    )


def test_set_codebook_curve_equals_size_curve_everywhere():
    for seed in range(25):
        sys = random_system(seed, max_sets=12)
        book = codebook_from_sets(sys)
        for v in range(sys.universe_size()):
            x = B.from_value(sys.universe_n, v)
            prof = profile(sys, x)
            curve = snooping_curve(book, x, alpha_max=prof.alpha_max)
            for alpha in range(prof.alpha_max + 1):
                h = prof.h_key(alpha)
                row = curve.rows[alpha]
                if h is None:
                    # no model of x fits the budget: every affordable
                    # strategy (if any) predicts some bit of x with 0
                    assert row.loss == math.inf
                else:
                    assert row.product == Fraction(1, h)
                    assert row.loss == pytest.approx(log2_display(h))


def test_snooping_losses_never_increase():
    for seed in range(10):
        sys = random_system(seed)
        book = codebook_from_sets(sys)
        x = B.from_value(sys.universe_n, seed % sys.universe_size())
        losses = snooping_curve(book, x).loss_values()
        assert all(a >= b for a, b in zip(losses, losses[1:]))


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------


STRATEGY_TEXT = ".\t1/3\n0\t1/2\n1\t0\n"


def test_strategy_fixture_round_trip():
    strat = parse_strategy(STRATEGY_TEXT)
    assert strat == set_to_strategy(FiniteSet(2, ["00", "01", "10"]))
    assert parse_strategy(format_strategy(strat)) == strat


@pytest.mark.parametrize(
    "text, message",
    [
        ("", "names no prefixes"),
        (".\t1/2\textra", "expected"),
        ("x\t1/2", "malformed prefix"),
        (".\tone", "malformed belief"),
        (".\t1/2\n.\t1/3", "repeated prefix"),
        (".\t1/0", "malformed belief"),
    ],
)
def test_strategy_fixture_errors(text, message):
    with pytest.raises(FixtureError, match=message):
        parse_strategy(text)


def test_strategy_fixture_must_be_total():
    with pytest.raises(StructLabError, match="cover all"):
        parse_strategy(".\t1/2\n0\t1/2\n")


def test_codebook_fixture_round_trip(fixa):
    book = codebook_from_sets(fixa)
    text = format_codebook(book)
    again = parse_codebook(text)
    assert again.programs == book.programs
    assert format_codebook(again) == text


@pytest.mark.parametrize(
    "text, message",
    [
        ("", "names no programs"),
        ("0\t.\t", "expected"),
        ("0x\t.\t1/2", "malformed program"),
        ("0\tq\t1/2", "malformed prefix"),
        ("0\t.\tq", "malformed belief"),
        ("0\t.\t1/2\n0\t.\t1/3", "repeated prefix"),
    ],
)
def test_codebook_fixture_errors(text, message):
    with pytest.raises(FixtureError, match=message):
        parse_codebook(text)
