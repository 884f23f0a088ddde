import numpy as np
import pytest

from keywordga import (
    Chromosome,
    ConfigError,
    EvaluationError,
    GaConfig,
    InputError,
    Population,
    ScoredChromosome,
    evolve,
    exhaustive_best,
    init_population,
    mutate,
    repair,
    scattered_crossover,
    select_parent,
)
from helpers import StubRng, planted_deficit_fitness


def ga_config(**overrides):
    base = dict(max_generations=50, seed=0, pop_size=20, chromosome_size=5, elite_count=2)
    base.update(overrides)
    return GaConfig(**base)


class TestChromosome:
    def test_set_equality_and_hash(self):
        a = Chromosome((3, 1, 2))
        b = Chromosome((1, 2, 3))
        assert a == b
        assert hash(a) == hash(b)
        assert a.canonical == (1, 2, 3)
        assert a.genes == (3, 1, 2)

    def test_duplicates_rejected(self):
        with pytest.raises(ValueError):
            Chromosome((1, 1, 2))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            Chromosome(())

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            Chromosome((-1, 2))


class TestGaConfig:
    def test_elite_count_below_pop_size(self):
        with pytest.raises(ConfigError):
            ga_config(pop_size=5, elite_count=5)

    def test_crossover_fraction_bounds(self):
        with pytest.raises(ConfigError):
            ga_config(crossover_fraction=1.5)

    def test_mutation_rate_bounds(self):
        with pytest.raises(ConfigError):
            ga_config(mutation_rate=0.0)

    def test_default_mutation_rate_is_one_over_size(self):
        assert ga_config(chromosome_size=10).effective_mutation_rate == 0.1
        assert ga_config(mutation_rate=0.5).effective_mutation_rate == 0.5


class TestInitPopulation:
    def test_full_pool_forced_when_sizes_match(self, rng):
        cfg = ga_config(pop_size=8, chromosome_size=10)
        pop = init_population(10, cfg, rng)
        for member in pop.members:
            assert member.chromosome.canonical == tuple(range(10))
            assert member.fitness is None

    def test_structural_invariants_at_reference_scale(self, rng):
        cfg = GaConfig(max_generations=1, seed=0, pop_size=50, chromosome_size=30)
        pop = init_population(1000, cfg, rng)
        assert len(pop) == 50
        for member in pop.members:
            genes = member.chromosome.genes
            assert len(genes) == 30
            assert len(set(genes)) == 30
            assert all(0 <= g < 1000 for g in genes)

    def test_deterministic_for_fixed_seed(self):
        cfg = ga_config()
        a = init_population(40, cfg, np.random.default_rng(5))
        b = init_population(40, cfg, np.random.default_rng(5))
        assert [m.chromosome for m in a.members] == [m.chromosome for m in b.members]

    def test_oversized_chromosome_rejected(self, rng):
        with pytest.raises(ConfigError):
            init_population(3, ga_config(chromosome_size=5), rng)


def scored_population(fitnesses):
    members = tuple(
        ScoredChromosome(Chromosome((i,)), f) for i, f in enumerate(fitnesses)
    )
    return Population(members, generation=0)


class TestSelectParent:
    def test_unevaluated_population_rejected(self):
        pop = Population((ScoredChromosome(Chromosome((0,)), None),) * 2)
        with pytest.raises(ValueError):
            select_parent(pop, np.random.default_rng(0))

    def test_dominant_member_wins_every_tournament_it_enters(self):
        pop = scored_population([1.0, 1.0, 0.0, 1.0])
        # enumerate draws: whenever index 2 appears, it must win
        for i in range(4):
            for j in range(4):
                winner = select_parent(pop, StubRng(integers=[i, j]))
                if 2 in (i, j):
                    assert winner == Chromosome((2,))
                else:
                    assert winner in (Chromosome((i,)), Chromosome((j,)))

    def test_uniform_marginal_when_fitness_equal(self):
        pop = scored_population([0.5, 0.5, 0.5, 0.5])
        rng = np.random.default_rng(7)
        counts = np.zeros(4)
        draws = 10_000
        for _ in range(draws):
            counts[select_parent(pop, rng).genes[0]] += 1
        # 3 sigma around 2500 for a binomial(10000, 1/4)
        sigma = (draws * 0.25 * 0.75) ** 0.5
        assert np.all(np.abs(counts - draws / 4) < 3 * sigma)

    def test_two_member_probabilities(self):
        # draws (i, j) are uniform over 4 pairs; 0.1 wins 3 of them
        pop = scored_population([0.1, 0.9])
        rng = np.random.default_rng(3)
        draws = 20_000
        wins = sum(
            select_parent(pop, rng) == Chromosome((0,)) for _ in range(draws)
        )
        sigma = (draws * 0.75 * 0.25) ** 0.5
        assert abs(wins - draws * 0.75) < 3 * sigma

    def test_tie_keeps_first_drawn(self):
        pop = scored_population([0.5, 0.5])
        stub = StubRng(integers=[1, 0])
        assert select_parent(pop, stub) == Chromosome((1,))


class TestScatteredCrossover:
    def test_identical_parents_give_identical_child(self, rng):
        a = Chromosome((4, 9, 2))
        child = scattered_crossover(a, Chromosome((4, 9, 2)), 20, rng)
        assert child == a

    def test_all_ones_mask_copies_first_parent(self):
        a = Chromosome((1, 3, 5))
        b = Chromosome((2, 4, 6))
        stub = StubRng(randoms=[0.0, 0.0, 0.0])
        assert scattered_crossover(a, b, 10, stub) == a

    def test_all_zeros_mask_copies_second_parent(self):
        a = Chromosome((1, 3, 5))
        b = Chromosome((2, 4, 6))
        stub = StubRng(randoms=[0.9, 0.9, 0.9])
        assert scattered_crossover(a, b, 10, stub) == b

    def test_size_mismatch_rejected(self, rng):
        with pytest.raises(InputError):
            scattered_crossover(Chromosome((1,)), Chromosome((1, 2)), 10, rng)

    def test_disjoint_parents_child_within_union(self, rng):
        pool = 100
        for _ in range(1000):
            genes = rng.choice(pool, size=10, replace=False)
            a = Chromosome(tuple(int(g) for g in genes[:5]))
            b = Chromosome(tuple(int(g) for g in genes[5:]))
            child = scattered_crossover(a, b, pool, rng)
            union = set(a.genes) | set(b.genes)
            assert set(child.genes) <= union
            assert len(set(child.genes)) == 5

    def test_overlapping_parents_stay_valid(self, rng):
        pool = 30
        for _ in range(1000):
            a = Chromosome(tuple(int(g) for g in rng.choice(pool, 6, replace=False)))
            b = Chromosome(tuple(int(g) for g in rng.choice(pool, 6, replace=False)))
            child = scattered_crossover(a, b, pool, rng)
            assert len(set(child.genes)) == 6
            assert all(0 <= g < pool for g in child.genes)


class TestMutate:
    def test_no_flips_leaves_chromosome_unchanged(self):
        c = Chromosome((1, 2, 3))
        stub = StubRng(randoms=[0.9, 0.9, 0.9])
        assert mutate(c, 10, 0.5, stub).genes == (1, 2, 3)

    def test_full_pool_returns_unchanged(self, rng):
        c = Chromosome((0, 1, 2))
        assert mutate(c, 3, 1.0, rng) is c

    def test_rate_bounds_enforced(self, rng):
        with pytest.raises(ConfigError):
            mutate(Chromosome((0,)), 5, 0.0, rng)

    def test_replacement_never_collides(self, rng):
        for _ in range(1000):
            genes = tuple(int(g) for g in rng.choice(100, size=10, replace=False))
            mutated = mutate(Chromosome(genes), 100, 1.0, rng)
            assert len(set(mutated.genes)) == 10
            assert all(0 <= g < 100 for g in mutated.genes)

    def test_rate_one_replaces_every_gene_position(self):
        c = Chromosome((0, 1))
        stub = StubRng(randoms=[0.0, 0.0], integers=[0, 0])
        mutated = mutate(c, 4, 1.0, stub)
        # free list is [2, 3] -> 2 replaces gene 0; then [0, 3] -> 0 replaces gene 1
        assert mutated.genes == (2, 0)


class TestRepair:
    def test_duplicate_replaced(self, rng):
        c = repair([3, 3, 5], 10, rng)
        assert len(c.genes) == 3
        assert {3, 5} <= set(c.genes)
        extra = set(c.genes) - {3, 5}
        assert len(extra) == 1
        assert extra < set(range(10))

    def test_distinct_input_unchanged(self, rng):
        assert repair([7, 1, 4], 10, rng).genes == (7, 1, 4)

    def test_out_of_range_rejected(self, rng):
        with pytest.raises(InputError):
            repair([0, 12], 10, rng)

    def test_random_duplicated_inputs(self, rng):
        for _ in range(1000):
            size = int(rng.integers(2, 9))
            genes = [int(g) for g in rng.integers(0, 12, size=size)]
            c = repair(genes, 12, rng)
            assert len(c.genes) == size
            assert len(set(c.genes)) == size
            assert all(0 <= g < 12 for g in c.genes)


class TestEvolve:
    def test_constant_fitness_gives_flat_trace(self):
        cfg = ga_config(max_generations=10, target_fitness=-1.0)
        best, trace = evolve(20, cfg, lambda c: 0.25)
        assert best.fitness == 0.25
        assert trace.best_fitness_series() == [0.25] * 10

    def test_planted_set_recovered(self):
        planted = frozenset({2, 5, 9, 13, 17})
        fitness = planted_deficit_fitness(planted)
        hits = 0
        for seed in range(20):
            cfg = GaConfig(
                max_generations=200, seed=seed, pop_size=50, chromosome_size=5,
                elite_count=5,
            )
            best, _ = evolve(20, cfg, fitness)
            hits += best.fitness == 0.0
        assert hits >= 19

    def test_matches_exhaustive_oracle_on_small_instance(self):
        # deterministic bumpy landscape over C(8,3)=56 subsets
        def fitness(c):
            return ((sum(g * g for g in c.genes) * 7919) % 97) / 97.0

        oracle = exhaustive_best(8, 3, fitness)
        results = []
        for seed in range(5):
            cfg = GaConfig(
                max_generations=300, seed=seed, pop_size=20, chromosome_size=3,
                elite_count=2,
            )
            best, _ = evolve(8, cfg, fitness)
            results.append(best.fitness)
        assert min(results) == oracle.fitness

    def test_bitwise_deterministic(self):
        fitness = planted_deficit_fitness({1, 4, 6})
        cfg = ga_config(max_generations=15, chromosome_size=3, target_fitness=-1.0)
        best_a, trace_a = evolve(15, cfg, fitness)
        best_b, trace_b = evolve(15, cfg, fitness)
        assert best_a == best_b and best_a.fitness == best_b.fitness
        assert trace_a.records == trace_b.records

    def test_workers_do_not_change_results(self):
        fitness = planted_deficit_fitness({0, 3, 7, 11})
        cfg = ga_config(max_generations=20, chromosome_size=4, target_fitness=-1.0)
        _, serial = evolve(24, cfg, fitness, workers=1)
        _, threaded = evolve(24, cfg, fitness, workers=3)
        assert serial.records == threaded.records

    def test_elitism_keeps_best_fitness_non_increasing(self, rng):
        for trial in range(8):
            pool = int(rng.integers(8, 24))
            size = int(rng.integers(2, min(7, pool)))
            planted = frozenset(
                int(g) for g in rng.choice(pool, size=size, replace=False)
            )
            cfg = GaConfig(
                max_generations=30,
                seed=trial,
                pop_size=int(rng.integers(4, 16)),
                chromosome_size=size,
                elite_count=int(rng.integers(1, 4)),
                crossover_fraction=float(rng.random()),
                mutation_rate=float(rng.uniform(0.05, 0.5)),
                target_fitness=-1.0,
            )
            _, trace = evolve(pool, cfg, planted_deficit_fitness(planted))
            series = trace.best_fitness_series()
            assert all(b <= a + 1e-15 for a, b in zip(series, series[1:]))

    def test_population_invariants_every_generation(self):
        observed = []

        def observer(population):
            observed.append(population)

        cfg = ga_config(max_generations=12, pop_size=9, chromosome_size=4,
                        target_fitness=-1.0)
        evolve(15, cfg, planted_deficit_fitness({1, 2, 3, 4}), on_generation=observer)
        assert [p.generation for p in observed] == list(range(12))
        for population in observed:
            assert len(population) == 9
            for member in population.members:
                genes = member.chromosome.genes
                assert len(genes) == 4
                assert len(set(genes)) == 4
                assert all(0 <= g < 15 for g in genes)
                assert member.fitness is not None

    def test_target_fitness_stops_early(self):
        cfg = ga_config(max_generations=100, chromosome_size=2, target_fitness=0.5)
        _, trace = evolve(10, cfg, lambda c: 0.4)
        assert len(trace) == 1

    def test_stall_stops_early(self):
        cfg = ga_config(
            max_generations=100, chromosome_size=2, stall_generations=4,
            target_fitness=-1.0,
        )
        _, trace = evolve(10, cfg, lambda c: 0.3)
        # generation 0 improves from nothing; then 4 stalled generations
        assert len(trace) == 5

    def test_fitness_errors_carry_generation_context(self):
        def broken(c):
            raise RuntimeError("boom")

        cfg = ga_config(max_generations=5)
        with pytest.raises(EvaluationError, match="generation 0"):
            evolve(20, cfg, broken)

    def test_nan_fitness_rejected(self):
        cfg = ga_config(max_generations=5)
        with pytest.raises(EvaluationError, match="NaN"):
            evolve(20, cfg, lambda c: float("nan"))


class TestExhaustiveBest:
    def test_single_full_subset(self):
        best = exhaustive_best(3, 3, lambda c: 0.7)
        assert best.chromosome.canonical == (0, 1, 2)
        assert best.fitness == 0.7

    def test_minimal_gene_value(self):
        best = exhaustive_best(4, 1, lambda c: float(c.genes[0]))
        assert best.chromosome.canonical == (0,)

    def test_tie_keeps_lexicographically_first(self):
        best = exhaustive_best(5, 2, lambda c: 0.0)
        assert best.chromosome.canonical == (0, 1)

    def test_cap_enforced(self):
        with pytest.raises(ConfigError, match="cap"):
            exhaustive_best(40, 15, lambda c: 0.0, cap=1000)

    def test_bad_sizes_rejected(self):
        with pytest.raises(ConfigError):
            exhaustive_best(3, 4, lambda c: 0.0)
