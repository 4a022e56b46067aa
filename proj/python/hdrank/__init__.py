"""Hyperdimensional-computing surrogate for ranking transformer architectures.

The heavy lifting lives in the compiled ``_hdrank`` extension; this package
re-exports its surface.
"""

from ._hdrank import (
    ArchDescriptor,
    HdrankError,
    ItemMemorySet,
    Model,
    build_item_memories,
    cap_bipolarize,
    cosine_similarity,
    encode_batch,
    encode_gram,
    encode_record,
    hv_add,
    hv_mult,
    hv_permute,
    kendall_tau,
    kendall_tau_bruteforce,
    load_model,
    predict_similarities,
    random_bipolar,
    ranks_to_weights,
    save_model,
    score,
    similarities_to_ranks,
    train,
)

__all__ = [
    "ArchDescriptor",
    "HdrankError",
    "ItemMemorySet",
    "Model",
    "build_item_memories",
    "cap_bipolarize",
    "cosine_similarity",
    "encode_batch",
    "encode_gram",
    "encode_record",
    "hv_add",
    "hv_mult",
    "hv_permute",
    "kendall_tau",
    "kendall_tau_bruteforce",
    "load_model",
    "predict_similarities",
    "random_bipolar",
    "ranks_to_weights",
    "save_model",
    "score",
    "similarities_to_ranks",
    "train",
]
