from .structured import StructuredForest, concat_trees, ext_forest, split_axis, union_forests
from .valuation import LazyOrder, LazyStructuredTree
from .sbjt import (
    LazySBJTree,
    SBJTree,
    SEncoding,
    decode_S,
    encode_S,
    evaluate_sbj,
    fgs,
    op_concat,
    op_ext,
    omega_tree,
    split,
    structure,
    synthesize,
    val,
    validate_S,
)
from .sjt import LazySJTree, SJForest, evaluate_sj, mkf, sj_apply, structure_forest, val_sj
from .ojt import (
    JoinHedge,
    LazySOJTree,
    OJTree,
    SOJTree,
    evaluate_soj,
    hedge_concat,
    mkh,
    oj_global_from_local,
    oj_local_from_global,
    soj_apply,
    soj_concat,
    soj_ext,
    structure_ordered,
    val_soj,
)

__all__ = [
    "StructuredForest",
    "concat_trees",
    "ext_forest",
    "split_axis",
    "union_forests",
    "LazyOrder",
    "LazyStructuredTree",
    "LazySBJTree",
    "SBJTree",
    "SEncoding",
    "decode_S",
    "encode_S",
    "evaluate_sbj",
    "fgs",
    "op_concat",
    "op_ext",
    "omega_tree",
    "split",
    "structure",
    "synthesize",
    "val",
    "validate_S",
    "LazySJTree",
    "SJForest",
    "evaluate_sj",
    "mkf",
    "sj_apply",
    "structure_forest",
    "val_sj",
    "JoinHedge",
    "LazySOJTree",
    "OJTree",
    "SOJTree",
    "evaluate_soj",
    "hedge_concat",
    "mkh",
    "oj_global_from_local",
    "oj_local_from_global",
    "soj_apply",
    "soj_concat",
    "soj_ext",
    "structure_ordered",
    "val_soj",
]
