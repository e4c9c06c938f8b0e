"""Evolutionary search where crossover is a groupoid operation.

The solution space is a factored product shape; a crossover draws one
flat operation and emits both children a*b and b*a; mutations are factor
automorphisms applied coordinate-wise. One seeded random stream drives
initialization, selection, operation choice, and mutation, in a fixed
order. Fitness evaluation is pure and may run on worker threads without
touching the stream, so results are independent of the worker count.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .constructions import ProductShape, parse_structure_spec
from .errors import CapacityError, ParseError, ValidationError
from .morphisms import is_automorphism
from .tables import NGroupoid

FORMAT_VERSION = 1

Point = tuple[int, ...]

FITNESS_NAMES = ("onemax", "weighted-linear", "trap")


@dataclass(frozen=True)
class MutationSpec:
    """Apply one factor automorphism to one coordinate with a probability."""

    factor: int
    perm: tuple[int, ...]
    prob: float


@dataclass(frozen=True)
class SolutionSpace:
    """Points are tuples of factor elements; operations stay factored."""

    shape: ProductShape

    @property
    def arity(self) -> int:
        return self.shape.arity

    def random_point(self, rng: random.Random) -> Point:
        return tuple(rng.randrange(k) for k in self.shape.factor_orders)

    def validate_point(self, point: Sequence[int]) -> Point:
        return self.shape.validate_point(point)


def crossover(space: SolutionSpace, parent_a: Point, parent_b: Point, op_index: int) -> tuple[Point, Point]:
    """Both children of one operation: (a*b, b*a)."""
    a = space.validate_point(parent_a)
    b = space.validate_point(parent_b)
    return space.shape.apply(op_index, a, b), space.shape.apply(op_index, b, a)


def mutate(
    space: SolutionSpace,
    point: Point,
    mutations: Sequence[MutationSpec],
    rng: random.Random,
) -> Point:
    """Independently apply each configured automorphism with its probability."""
    out = list(space.validate_point(point))
    for spec in mutations:
        if rng.random() < spec.prob:
            out[spec.factor] = spec.perm[out[spec.factor]]
    return tuple(out)


def validate_mutations(shape: ProductShape, mutations: Sequence[MutationSpec]) -> list[str]:
    """Return every violation; an empty list means the set is usable."""
    problems = []
    for i, spec in enumerate(mutations):
        if not 0 <= spec.factor < shape.arity:
            problems.append(f"mutation {i}: factor index {spec.factor} out of range")
            continue
        factor = shape.factors[spec.factor]
        if len(spec.perm) != factor.order or sorted(spec.perm) != list(range(factor.order)):
            problems.append(
                f"mutation {i}: {list(spec.perm)} is not a permutation of the factor's "
                f"{factor.order} elements"
            )
            continue
        if not is_automorphism(factor, spec.perm):
            problems.append(
                f"mutation {i}: permutation {list(spec.perm)} is not an automorphism "
                f"of factor {spec.factor}"
            )
        if not 0.0 <= spec.prob <= 1.0:
            problems.append(f"mutation {i}: probability {spec.prob} outside [0, 1]")
    return problems


def make_fitness(shape: ProductShape, spec: object) -> tuple[Callable[[Point], float], float, dict]:
    """Resolve a named fitness over tuple coordinates.

    Returns (function, optimum, normalized spec). All built-ins have a
    computable optimum, used as the default success target.
    """
    if isinstance(spec, str):
        spec = {"name": spec}
    if not isinstance(spec, dict) or "name" not in spec:
        raise ValidationError(f"fitness spec must be a name or an object with a name, got {spec!r}")
    name = spec["name"]
    orders = shape.factor_orders
    if name == "onemax":
        fn = lambda p: float(sum(p))
        optimum = float(sum(k - 1 for k in orders))
        return fn, optimum, {"name": name}
    if name == "weighted-linear":
        weights = spec.get("weights", [1.0] * shape.arity)
        if len(weights) != shape.arity:
            raise ValidationError(
                f"weighted-linear needs {shape.arity} weights, got {len(weights)}"
            )
        ws = tuple(float(w) for w in weights)
        fn = lambda p: float(sum(w * v for w, v in zip(ws, p)))
        optimum = float(sum(max(w * v for v in range(k)) for w, k in zip(ws, orders)))
        return fn, optimum, {"name": name, "weights": list(ws)}
    if name == "trap":
        # Deceptive: all coordinates at their maximum scores the arity,
        # otherwise the score rewards coordinates held at the minimum.
        tops = tuple(k - 1 for k in orders)
        arity = shape.arity

        def fn(p: Point) -> float:
            lit = sum(1 for v, top in zip(p, tops) if v == top)
            return float(arity) if lit == arity else float(arity - 1 - lit)

        return fn, float(arity), {"name": name}
    raise ValidationError(f"unknown fitness {name!r} (choose from {', '.join(FITNESS_NAMES)})")


@dataclass(frozen=True)
class GenStats:
    generation: int
    best: float
    mean: float
    diversity: int


class GaRun:
    """One seeded evolutionary run over a fixed shape and operator set."""

    def __init__(
        self,
        space: SolutionSpace,
        fitness: Callable[[Point], float],
        mutations: Sequence[MutationSpec],
        *,
        population: int,
        generations: int,
        tournament: int = 2,
        elitism: int = 1,
        seed: int = 0,
        op_weights: Optional[Sequence[float]] = None,
        target: Optional[float] = None,
        jobs: int = 1,
    ) -> None:
        if population < 2:
            raise ValidationError("population size must be at least 2")
        if not 0 <= elitism < population:
            raise ValidationError("elitism must be smaller than the population")
        if tournament < 1:
            raise ValidationError("tournament size must be at least 1")
        problems = validate_mutations(space.shape, mutations)
        if problems:
            raise ValidationError("; ".join(problems))
        if op_weights is not None:
            if len(op_weights) != space.shape.n_flat_ops:
                raise ValidationError(
                    f"op_weights needs {space.shape.n_flat_ops} entries, got {len(op_weights)}"
                )
            if any(w < 0 for w in op_weights) or sum(op_weights) <= 0:
                raise ValidationError("op_weights must be nonnegative with a positive sum")
        self.space = space
        self.fitness = fitness
        self.mutations = tuple(mutations)
        self.population_size = population
        self.generations = generations
        self.tournament = tournament
        self.elitism = elitism
        self.seed = seed
        self.op_weights = tuple(op_weights) if op_weights is not None else None
        self.target = target
        self.jobs = jobs
        self.rng = random.Random(seed)
        self.population: list[Point] = [
            space.random_point(self.rng) for _ in range(population)
        ]
        self.stats: list[GenStats] = []
        self.reached_generation: Optional[int] = None

    def _evaluate(self) -> list[float]:
        if self.jobs > 1:
            with ThreadPoolExecutor(max_workers=self.jobs) as pool:
                return list(pool.map(self.fitness, self.population))
        return [self.fitness(p) for p in self.population]

    def _pick_parent(self, fits: list[float]) -> int:
        contenders = [
            self.rng.randrange(self.population_size) for _ in range(self.tournament)
        ]
        return min(contenders, key=lambda i: (-fits[i], i))

    def _pick_op(self) -> int:
        n = self.space.shape.n_flat_ops
        if self.op_weights is None:
            return self.rng.randrange(n)
        return self.rng.choices(range(n), weights=self.op_weights, k=1)[0]

    def step(self) -> GenStats:
        """Evaluate, record, then breed the next population with elitism."""
        fits = self._evaluate()
        gen = len(self.stats)
        best = max(fits)
        stats = GenStats(gen, best, sum(fits) / len(fits), len(set(self.population)))
        self.stats.append(stats)
        if (
            self.target is not None
            and self.reached_generation is None
            and best >= self.target - 1e-9
        ):
            self.reached_generation = gen

        ranked = sorted(range(self.population_size), key=lambda i: (-fits[i], i))
        next_pop = [self.population[i] for i in ranked[: self.elitism]]
        while len(next_pop) < self.population_size:
            pa = self.population[self._pick_parent(fits)]
            pb = self.population[self._pick_parent(fits)]
            children = crossover(self.space, pa, pb, self._pick_op())
            for child in children:
                if len(next_pop) >= self.population_size:
                    break
                next_pop.append(mutate(self.space, child, self.mutations, self.rng))
        self.population = next_pop
        return stats

    def run(self, stop_at_target: bool = True) -> "GaRun":
        for _ in range(self.generations):
            self.step()
            if stop_at_target and self.reached_generation is not None:
                break
        return self

    @property
    def best_fitness(self) -> float:
        return max(s.best for s in self.stats) if self.stats else float("-inf")


@dataclass(frozen=True)
class FamilyConfig:
    name: str
    factor_specs: tuple[str, ...]
    shape: ProductShape
    mutations: tuple[MutationSpec, ...]
    op_weights: Optional[tuple[float, ...]]


@dataclass(frozen=True)
class ExperimentConfig:
    population: int
    generations: int
    tournament: int
    elitism: int
    seeds: tuple[int, ...]
    fitness_spec: object
    target: Optional[float]
    families: tuple[FamilyConfig, ...]

    def echo(self) -> dict:
        return {
            "population": self.population,
            "generations": self.generations,
            "tournament": self.tournament,
            "elitism": self.elitism,
            "seeds": list(self.seeds),
            "fitness": self.fitness_spec,
            "target": self.target,
            "families": [
                {
                    "name": f.name,
                    "shape": list(f.factor_specs),
                    "mutations": [
                        {"factor": m.factor, "perm": list(m.perm), "prob": m.prob}
                        for m in f.mutations
                    ],
                    "op_weights": list(f.op_weights) if f.op_weights else None,
                }
                for f in self.families
            ],
        }


def parse_experiment_config(obj: object) -> ExperimentConfig:
    """Validate a config mapping, collecting every violation before failing."""
    problems: list[str] = []
    if not isinstance(obj, dict):
        raise ValidationError("config must be a JSON object")

    def read_int(key: str, default=None, minimum=None):
        value = obj.get(key, default)
        if value is None:
            problems.append(f"missing required field {key!r}")
            return None
        if not isinstance(value, int) or isinstance(value, bool):
            problems.append(f"{key} must be an integer, got {value!r}")
            return None
        if minimum is not None and value < minimum:
            problems.append(f"{key} must be >= {minimum}, got {value}")
            return None
        return value

    population = read_int("population", minimum=2)
    generations = read_int("generations", minimum=1)
    tournament = read_int("tournament", default=2, minimum=1)
    elitism = obj.get("elitism", 1)
    if not isinstance(elitism, int) or isinstance(elitism, bool) or elitism < 0:
        problems.append(f"elitism must be a nonnegative integer, got {elitism!r}")
        elitism = 0
    if population is not None and elitism >= population:
        problems.append(f"elitism {elitism} must be smaller than the population {population}")

    if "seeds" in obj:
        seeds_raw = obj["seeds"]
    elif "seed" in obj:
        seeds_raw = [obj["seed"]]
    else:
        seeds_raw = None
        problems.append("missing required field 'seed' or 'seeds'")
    seeds: tuple[int, ...] = ()
    if seeds_raw is not None:
        if (
            not isinstance(seeds_raw, list)
            or not seeds_raw
            or not all(isinstance(s, int) and not isinstance(s, bool) for s in seeds_raw)
        ):
            problems.append(f"seeds must be a nonempty list of integers, got {seeds_raw!r}")
        else:
            seeds = tuple(seeds_raw)

    target = obj.get("target")
    if target is not None and not isinstance(target, (int, float)):
        problems.append(f"target must be a number, got {target!r}")
        target = None

    families_raw = obj.get("families")
    if families_raw is None:
        if "shape" in obj:
            families_raw = [
                {
                    "name": obj.get("name", "run"),
                    "shape": obj.get("shape"),
                    "mutations": obj.get("mutations", []),
                    "op_weights": obj.get("op_weights"),
                }
            ]
        else:
            problems.append("config needs either 'families' or a top-level 'shape'")
            families_raw = []
    if not isinstance(families_raw, list):
        problems.append("'families' must be a list")
        families_raw = []

    fitness_spec = obj.get("fitness")
    if fitness_spec is None:
        problems.append("missing required field 'fitness'")

    families: list[FamilyConfig] = []
    for fi, fam in enumerate(families_raw):
        if not isinstance(fam, dict):
            problems.append(f"family {fi} must be an object")
            continue
        name = fam.get("name", f"family-{fi}")
        specs = fam.get("shape")
        if not isinstance(specs, list) or not specs:
            problems.append(f"family {name}: 'shape' must be a nonempty list of factor specs")
            continue
        factors: list[NGroupoid] = []
        spec_ok = True
        for s in specs:
            try:
                factors.append(parse_structure_spec(str(s)))
            except (ParseError, ValidationError, CapacityError) as exc:
                problems.append(f"family {name}: bad factor spec {s!r}: {exc}")
                spec_ok = False
        if not spec_ok:
            continue
        shape = ProductShape(tuple(factors))
        mut_raw = fam.get("mutations", [])
        mutations: list[MutationSpec] = []
        if not isinstance(mut_raw, list):
            problems.append(f"family {name}: 'mutations' must be a list")
            mut_raw = []
        for mi, m in enumerate(mut_raw):
            try:
                mutations.append(
                    MutationSpec(int(m["factor"]), tuple(int(v) for v in m["perm"]), float(m["prob"]))
                )
            except (KeyError, TypeError, ValueError) as exc:
                problems.append(f"family {name}: mutation {mi} needs factor/perm/prob: {exc}")
        for msg in validate_mutations(shape, mutations):
            problems.append(f"family {name}: {msg}")
        op_weights = fam.get("op_weights")
        if op_weights is not None:
            if (
                not isinstance(op_weights, list)
                or len(op_weights) != shape.n_flat_ops
                or any(not isinstance(w, (int, float)) or w < 0 for w in op_weights)
                or sum(op_weights) <= 0
            ):
                problems.append(
                    f"family {name}: op_weights must be {shape.n_flat_ops} nonnegative "
                    "numbers with a positive sum"
                )
                op_weights = None
        if fitness_spec is not None:
            try:
                make_fitness(shape, fitness_spec)
            except ValidationError as exc:
                problems.append(f"family {name}: {exc}")
        families.append(
            FamilyConfig(
                str(name),
                tuple(str(s) for s in specs),
                shape,
                tuple(mutations),
                tuple(op_weights) if op_weights else None,
            )
        )

    if problems:
        raise ValidationError(
            "invalid configuration:\n" + "\n".join(f"- {p}" for p in problems)
        )
    assert population is not None and generations is not None and tournament is not None
    return ExperimentConfig(
        population,
        generations,
        tournament,
        elitism,
        seeds,
        fitness_spec if isinstance(fitness_spec, dict) else {"name": fitness_spec},
        float(target) if target is not None else None,
        tuple(families),
    )


@dataclass(frozen=True)
class RunRecord:
    family: str
    seed: int
    target: float
    reached: bool
    reached_generation: Optional[int]
    best: float
    generations_run: int
    stats: tuple[GenStats, ...]


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    runs: list[RunRecord] = field(default_factory=list)

    def family_names(self) -> list[str]:
        return [f.name for f in self.config.families]

    def runs_for(self, family: str) -> list[RunRecord]:
        return [r for r in self.runs if r.family == family]

    def success_rate(self, family: str) -> float:
        runs = self.runs_for(family)
        return sum(1 for r in runs if r.reached) / len(runs) if runs else 0.0

    def to_json(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "kind": "ga-report",
            "config": self.config.echo(),
            "families": [
                {
                    "name": name,
                    "success_rate": self.success_rate(name),
                    "runs": [
                        {
                            "seed": r.seed,
                            "target": r.target,
                            "reached": r.reached,
                            "reached_generation": r.reached_generation,
                            "best": r.best,
                            "generations_run": r.generations_run,
                        }
                        for r in self.runs_for(name)
                    ],
                }
                for name in self.family_names()
            ],
        }

    def csv_lines(self) -> list[str]:
        lines = [f"# format_version={FORMAT_VERSION}", "family,seed,generation,best,mean,diversity"]
        for r in self.runs:
            for s in r.stats:
                lines.append(
                    f"{r.family},{r.seed},{s.generation},{s.best},{s.mean},{s.diversity}"
                )
        return lines

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("\n".join(self.csv_lines()) + "\n")


def run_experiment(config: ExperimentConfig, jobs: int = 1) -> ExperimentReport:
    """Run every family over the shared seeds and budget; fully seeded."""
    report = ExperimentReport(config)
    for family in config.families:
        space = SolutionSpace(family.shape)
        fitness, optimum, _ = make_fitness(family.shape, config.fitness_spec)
        target = config.target if config.target is not None else optimum
        for seed in config.seeds:
            run = GaRun(
                space,
                fitness,
                family.mutations,
                population=config.population,
                generations=config.generations,
                tournament=config.tournament,
                elitism=config.elitism,
                seed=seed,
                op_weights=family.op_weights,
                target=target,
                jobs=jobs,
            ).run()
            report.runs.append(
                RunRecord(
                    family.name,
                    seed,
                    target,
                    run.reached_generation is not None,
                    run.reached_generation,
                    run.best_fitness,
                    len(run.stats),
                    tuple(run.stats),
                )
            )
    return report
