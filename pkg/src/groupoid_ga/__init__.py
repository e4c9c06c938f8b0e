"""Finite genetic-groupoid toolkit and groupoid-crossover GA engine."""

from .census import CensusReport, canonical_key, classify, enumerate_genetic, run_census
from .constructions import (
    ProductShape,
    SplicingSpec,
    band_dimensions,
    direct_product,
    genetic_extension,
    genetic_product,
    parse_structure_spec,
    product_chain,
    rectangular_band,
    splicing_groupoid,
)
from .engine import (
    GaRun,
    MutationSpec,
    SolutionSpace,
    crossover,
    make_fitness,
    mutate,
    parse_experiment_config,
    run_experiment,
)
from .errors import CapacityError, ParseError, ValidationError
from .morphisms import (
    AutGroup,
    MorphismWitness,
    automorphism_group,
    check_witness,
    find_isomorphism,
    is_automorphism,
    lift_automorphism,
)
from .tables import (
    Groupoid,
    NGroupoid,
    is_associative,
    is_genetic,
    is_idempotent,
    is_nowhere_commutative,
    is_rectangular_band,
    ngroupoid_from_json,
    ngroupoid_to_json,
    parse_compact3,
    serialize_compact3,
)
from .theorems import (
    TheoremReport,
    verify_all,
    verify_lemma1,
    verify_not_variety,
    verify_theorem1,
    verify_theorem2,
)

__version__ = "0.1.0"
