"""Genetic search over fixed-size keyword-index subsets.

A chromosome is a set of distinct pool indices. Each generation copies
the best members unchanged (elitism), fills most remaining slots with
uniform-mask crossover children of tournament winners and the rest with
mutated tournament winners. All randomness flows through one seeded
generator drawn on the coordinating thread, so a (seed, config,
fitness) triple reproduces a run exactly even when fitness evaluations
are dispatched to worker threads.
"""

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from .errors import ConfigError, EvaluationError, InputError


@dataclass(frozen=True, eq=False)
class Chromosome:
    """Distinct pool indices; order is kept for projection, but equality
    and hashing use the sorted form (a chromosome is a set)."""

    genes: tuple[int, ...]

    def __post_init__(self):
        genes = tuple(int(g) for g in self.genes)
        if not genes:
            raise ValueError("chromosome needs at least one gene")
        if len(set(genes)) != len(genes):
            raise ValueError(f"duplicate gene indices: {genes}")
        if min(genes) < 0:
            raise ValueError("gene indices must be nonnegative")
        object.__setattr__(self, "genes", genes)
        object.__setattr__(self, "_canonical", tuple(sorted(genes)))

    @property
    def size(self) -> int:
        return len(self.genes)

    @property
    def canonical(self) -> tuple[int, ...]:
        return self._canonical

    def __eq__(self, other):
        return isinstance(other, Chromosome) and self._canonical == other._canonical

    def __hash__(self):
        return hash(self._canonical)

    def __repr__(self):
        return f"Chromosome({list(self._canonical)})"


class ScoredChromosome(NamedTuple):
    chromosome: Chromosome
    fitness: Optional[float]


@dataclass(frozen=True)
class Population:
    """Fixed-size generation of (chromosome, fitness) pairs. fitness is
    None until the generation has been evaluated."""

    members: tuple[ScoredChromosome, ...]
    generation: int = 0

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class GaConfig:
    """Evolution parameters.

    crossover_fraction is the share of non-elite offspring produced by
    crossover; the remainder are mutated copies of tournament winners.
    mutation_rate applies per gene and defaults to 1/chromosome_size.
    The run stops at max_generations, at target_fitness, or after
    stall_generations without improvement (None disables the stall
    check).
    """

    max_generations: int
    seed: int
    pop_size: int = 50
    chromosome_size: int = 30
    elite_count: int = 5
    crossover_fraction: float = 0.8
    mutation_rate: Optional[float] = None
    stall_generations: Optional[int] = None
    target_fitness: float = 0.0

    def __post_init__(self):
        if self.max_generations < 1:
            raise ConfigError(f"max_generations must be >= 1, got {self.max_generations}")
        if self.pop_size < 1:
            raise ConfigError(f"pop_size must be >= 1, got {self.pop_size}")
        if self.chromosome_size < 1:
            raise ConfigError(
                f"chromosome_size must be >= 1, got {self.chromosome_size}"
            )
        if not 0 <= self.elite_count < self.pop_size:
            raise ConfigError(
                f"elite_count must be in [0, pop_size), got {self.elite_count}"
            )
        if not 0.0 <= self.crossover_fraction <= 1.0:
            raise ConfigError(
                f"crossover_fraction must be in [0, 1], got {self.crossover_fraction}"
            )
        if self.mutation_rate is not None and not 0.0 < self.mutation_rate <= 1.0:
            raise ConfigError(
                f"mutation_rate must be in (0, 1], got {self.mutation_rate}"
            )
        if self.stall_generations is not None and self.stall_generations < 1:
            raise ConfigError(
                f"stall_generations must be >= 1, got {self.stall_generations}"
            )

    @property
    def effective_mutation_rate(self) -> float:
        if self.mutation_rate is not None:
            return self.mutation_rate
        return 1.0 / self.chromosome_size


class TraceRecord(NamedTuple):
    generation: int
    best_fitness: float
    mean_fitness: float
    best_chromosome: Chromosome


@dataclass(frozen=True)
class EvolutionTrace:
    """One record per evaluated generation, starting at generation 0."""

    records: tuple[TraceRecord, ...]

    def __len__(self) -> int:
        return len(self.records)

    def best_fitness_series(self) -> list[float]:
        return [r.best_fitness for r in self.records]

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("generation,best_fitness,mean_fitness,best_genes\n")
            for rec in self.records:
                genes = ";".join(str(g) for g in rec.best_chromosome.canonical)
                fh.write(
                    f"{rec.generation},{rec.best_fitness!r},{rec.mean_fitness!r},{genes}\n"
                )


def init_population(
    pool_size: int, cfg: GaConfig, rng: np.random.Generator
) -> Population:
    """Uniform random distinct-index subsets, fitness not yet assigned."""
    if cfg.chromosome_size > pool_size:
        raise ConfigError(
            f"chromosome_size {cfg.chromosome_size} exceeds pool of {pool_size} indices"
        )
    members = tuple(
        ScoredChromosome(
            Chromosome(
                tuple(
                    int(g)
                    for g in rng.choice(
                        pool_size, size=cfg.chromosome_size, replace=False
                    )
                )
            ),
            None,
        )
        for _ in range(cfg.pop_size)
    )
    return Population(members, generation=0)


def select_parent(pop: Population, rng: np.random.Generator) -> Chromosome:
    """Size-2 tournament: draw two members uniformly (with replacement),
    return the lower-fitness one; ties keep the first drawn."""
    i = int(rng.integers(len(pop.members)))
    j = int(rng.integers(len(pop.members)))
    first, second = pop.members[i], pop.members[j]
    if first.fitness is None or second.fitness is None:
        raise ValueError("population must be evaluated before selection")
    return first.chromosome if first.fitness <= second.fitness else second.chromosome


def scattered_crossover(
    a: Chromosome, b: Chromosome, pool_size: int, rng: np.random.Generator
) -> Chromosome:
    """Uniform-mask crossover: gene i comes from `a` where the mask bit
    is set, else from `b`; duplicates are then repaired away.

    pool_size bounds the repair refill (crossing set-valued chromosomes
    index-wise can duplicate genes)."""
    if a.size != b.size:
        raise InputError(f"parent sizes differ: {a.size} vs {b.size}")
    mask = rng.random(a.size) < 0.5
    genes = [a.genes[i] if mask[i] else b.genes[i] for i in range(a.size)]
    return repair(genes, pool_size, rng)


def mutate(
    c: Chromosome, pool_size: int, rate: float, rng: np.random.Generator
) -> Chromosome:
    """Replace each gene with probability `rate` by a uniform random
    index not currently in the chromosome. Returns `c` unchanged when
    the pool has no free indices."""
    if not 0.0 < rate <= 1.0:
        raise ConfigError(f"mutation rate must be in (0, 1], got {rate}")
    if c.size >= pool_size:
        return c
    genes = list(c.genes)
    current = set(genes)
    for i in range(len(genes)):
        if rng.random() < rate:
            free = sorted(set(range(pool_size)) - current)
            replacement = free[int(rng.integers(len(free)))]
            current.discard(genes[i])
            current.add(replacement)
            genes[i] = replacement
    return Chromosome(tuple(genes))


def repair(
    genes: Sequence[int], pool_size: int, rng: np.random.Generator
) -> Chromosome:
    """Drop duplicate indices (keeping first occurrences), then refill to
    the original length with uniform random unused pool indices."""
    values = [int(g) for g in genes]
    for g in values:
        if not 0 <= g < pool_size:
            raise InputError(f"gene index {g} outside pool [0, {pool_size})")
    if len(values) > pool_size:
        raise InputError(
            f"cannot hold {len(values)} distinct genes in a pool of {pool_size}"
        )
    distinct = list(dict.fromkeys(values))
    need = len(values) - len(distinct)
    if need:
        candidates = np.array(sorted(set(range(pool_size)) - set(distinct)))
        picks = rng.choice(candidates, size=need, replace=False)
        distinct.extend(int(p) for p in picks)
    return Chromosome(tuple(distinct))


def evolve(
    pool_size: int,
    cfg: GaConfig,
    fitness_fn: Callable[[Chromosome], float],
    workers: int = 1,
    on_generation: Optional[Callable[[Population], None]] = None,
) -> tuple[ScoredChromosome, EvolutionTrace]:
    """Run the full evolutionary loop and return the best-ever member.

    Parameters
    ----------
    pool_size : int
        Number of selectable indices.
    cfg : GaConfig
        Evolution parameters including the seed.
    fitness_fn : callable
        Deterministic map from Chromosome to a float score (lower is
        better). Scores are memoized on the gene set, so the function
        must be pure; it must also tolerate concurrent calls when
        workers > 1.
    workers : int
        Thread count for evaluating a generation's members. Randomness
        is drawn before dispatch, so results do not depend on this.
    on_generation : callable, optional
        Observer invoked with each evaluated Population.

    Returns
    -------
    (best, trace)
        Best-ever scored chromosome (earliest on ties) and the full
        per-generation trace.
    """
    if workers < 1:
        raise ConfigError(f"workers must be >= 1, got {workers}")
    rng = np.random.default_rng(cfg.seed)
    chromosomes = [m.chromosome for m in init_population(pool_size, cfg, rng).members]
    cache: dict[tuple[int, ...], float] = {}
    executor = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    trace: list[TraceRecord] = []
    best_ever: Optional[ScoredChromosome] = None
    stall = 0
    try:
        for generation in range(cfg.max_generations):
            fitnesses = _score_all(
                chromosomes, fitness_fn, cache, executor, generation
            )
            scored = tuple(
                ScoredChromosome(c, f) for c, f in zip(chromosomes, fitnesses)
            )
            population = Population(scored, generation=generation)
            order = sorted(
                range(len(scored)),
                key=lambda idx: (fitnesses[idx], chromosomes[idx].canonical),
            )
            gen_best = scored[order[0]]
            trace.append(
                TraceRecord(
                    generation,
                    gen_best.fitness,
                    float(np.mean(fitnesses)),
                    gen_best.chromosome,
                )
            )
            if on_generation is not None:
                on_generation(population)
            if best_ever is None or gen_best.fitness < best_ever.fitness:
                best_ever = gen_best
                stall = 0
            else:
                stall += 1
            if best_ever.fitness <= cfg.target_fitness:
                break
            if cfg.stall_generations is not None and stall >= cfg.stall_generations:
                break
            if generation == cfg.max_generations - 1:
                break
            elites = [scored[idx].chromosome for idx in order[: cfg.elite_count]]
            n_children = cfg.pop_size - cfg.elite_count
            # Python round: halves go to the even neighbor
            n_cross = round(cfg.crossover_fraction * n_children)
            offspring = list(elites)
            for _ in range(n_cross):
                p1 = select_parent(population, rng)
                p2 = select_parent(population, rng)
                offspring.append(scattered_crossover(p1, p2, pool_size, rng))
            for _ in range(n_children - n_cross):
                parent = select_parent(population, rng)
                offspring.append(
                    mutate(parent, pool_size, cfg.effective_mutation_rate, rng)
                )
            chromosomes = offspring
    finally:
        if executor is not None:
            executor.shutdown(wait=True)
    return best_ever, EvolutionTrace(tuple(trace))


def _score_all(chromosomes, fitness_fn, cache, executor, generation):
    """Evaluate the uncached members of one generation, optionally on a
    thread pool. Results land in the memo keyed by gene set."""
    todo: dict[tuple[int, ...], Chromosome] = {}
    for c in chromosomes:
        if c.canonical not in cache:
            todo.setdefault(c.canonical, c)
    pending = list(todo.values())
    try:
        if executor is not None and len(pending) > 1:
            values = list(executor.map(fitness_fn, pending))
        else:
            values = [fitness_fn(c) for c in pending]
    except Exception as exc:
        raise EvaluationError(
            f"fitness evaluation failed at generation {generation}: {exc}"
        ) from exc
    for c, value in zip(pending, values):
        value = float(value)
        if math.isnan(value):
            raise EvaluationError(
                f"fitness returned NaN at generation {generation} "
                f"for genes {c.canonical}"
            )
        cache[c.canonical] = value
    return [cache[c.canonical] for c in chromosomes]


def exhaustive_best(
    pool_size: int,
    chromosome_size: int,
    fitness_fn: Callable[[Chromosome], float],
    cap: int = 1_000_000,
) -> ScoredChromosome:
    """Enumerate every subset in lexicographic order and return the
    minimum-fitness one (ties keep the lexicographically first). The
    brute-force oracle for evolve on small instances."""
    if not 1 <= chromosome_size <= pool_size:
        raise ConfigError(
            f"chromosome_size must be in [1, {pool_size}], got {chromosome_size}"
        )
    n_subsets = math.comb(pool_size, chromosome_size)
    if n_subsets > cap:
        raise ConfigError(
            f"{n_subsets} subsets exceed the enumeration cap of {cap}"
        )
    best: Optional[ScoredChromosome] = None
    for genes in itertools.combinations(range(pool_size), chromosome_size):
        candidate = Chromosome(genes)
        fitness = float(fitness_fn(candidate))
        if best is None or fitness < best.fitness:
            best = ScoredChromosome(candidate, fitness)
    return best
