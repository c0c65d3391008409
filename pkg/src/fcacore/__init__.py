"""pq-cores of formal contexts and the concept lattices of their cores."""

from .context import (
    ContextError,
    CxtParseError,
    FormalContext,
    closure_attributes,
    closure_objects,
    derive_attributes,
    derive_objects,
    dual,
    induced_by_names,
    induced_subcontext,
    is_induced_subcontext,
    parse_csv,
    parse_cxt,
    format_csv,
    format_cxt,
    read_context,
    write_context,
)
from .lattice import (
    Concept,
    ConceptLattice,
    compute_core_lattice,
    cover_relation,
    enumerate_concepts,
    insert_attributes_transform,
    join_irreducibles,
    lattice_transformer,
    meet_irreducibles,
    object_core_intents,
    remove_attributes_transform,
    to_dot,
)
from .pqcore import (
    CoreGrid,
    CoreParams,
    brute_force_core,
    compute_core,
    connected_components,
    core_counts,
    core_grid,
    core_order_diagram,
)
from .implications import (
    Implication,
    canonical_base,
    canonical_direct_base,
    core_implication_bounds,
    holds,
    iceberg_concepts,
    measures,
    theory_relation_check,
)
from .analysis import binary_search_readable, heatmap_export, interesting_cores

__version__ = "0.1.0"
