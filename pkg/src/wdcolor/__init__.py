"""Weak-diameter colorings and separated low-diameter partitions of finite
weighted graphs, with every produced object re-verified against its computed
bound."""

from wdcolor.graph import (
    INF,
    GraphError,
    WeightedGraph,
    as_fraction,
    neighborhood,
    parse_edge_list,
    power_graph,
    subdivision_graph,
    weak_diameter,
    write_edge_list,
)
from wdcolor.partition import (
    Coloring,
    ContractViolation,
    PartitionFamily,
    VerificationReport,
    check_weak_diameter,
    coloring_to_partition,
    measure_dilation,
    verify_partition_family,
    verify_weak_diameter,
)
from wdcolor.patching import (
    CenterCertificate,
    centered_bound,
    centered_color,
    control_radii,
    patch_bound,
    patch_colorings,
)
from wdcolor.treedec import (
    RootedTreeDecomposition,
    con_color_bound,
    condense,
    lift_condensation_coloring,
    validate_td,
)
from wdcolor.twcolor import (
    color_adhesion_construction,
    color_bounded_treewidth,
    compute_tree_decomposition,
    tree_extension_bound,
    treewidth_color_bound,
)
from wdcolor.geodesic import (
    ControlConstruction,
    GeodesicCertificate,
    GuardTriple,
    SlabSystem,
    bfs_geodesic_tree,
    centered_bags_bound,
    color_centered_bags,
    color_control_construction,
    color_layered,
    color_planar,
    combine_slab_colorings,
    control_extension_bound,
    distance_projection,
    layering_projection,
    make_slabs,
    tripod_decomposition,
)
from wdcolor.generators import GeneratorSpec, Instance, generate

__all__ = [
    "INF",
    "GraphError",
    "WeightedGraph",
    "as_fraction",
    "neighborhood",
    "parse_edge_list",
    "power_graph",
    "subdivision_graph",
    "weak_diameter",
    "write_edge_list",
    "Coloring",
    "ContractViolation",
    "PartitionFamily",
    "VerificationReport",
    "check_weak_diameter",
    "coloring_to_partition",
    "measure_dilation",
    "verify_partition_family",
    "verify_weak_diameter",
    "CenterCertificate",
    "centered_bound",
    "centered_color",
    "control_radii",
    "patch_bound",
    "patch_colorings",
    "RootedTreeDecomposition",
    "con_color_bound",
    "condense",
    "lift_condensation_coloring",
    "validate_td",
    "color_adhesion_construction",
    "color_bounded_treewidth",
    "compute_tree_decomposition",
    "tree_extension_bound",
    "treewidth_color_bound",
    "ControlConstruction",
    "GeodesicCertificate",
    "GuardTriple",
    "SlabSystem",
    "bfs_geodesic_tree",
    "centered_bags_bound",
    "color_centered_bags",
    "color_control_construction",
    "color_layered",
    "color_planar",
    "combine_slab_colorings",
    "control_extension_bound",
    "distance_projection",
    "layering_projection",
    "make_slabs",
    "tripod_decomposition",
    "GeneratorSpec",
    "Instance",
    "generate",
]

__version__ = "0.1.0"
