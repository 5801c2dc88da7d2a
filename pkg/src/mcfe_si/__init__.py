"""Multi-client functional encryption for pairwise set intersection
with non-monotonic attribute policies, over a Type-III bilinear group."""

from .pairing import (
    DecodeError,
    GElem,
    GHatElem,
    GroupContext,
    GTElem,
    default_context,
)
from .policy import (
    AccessMatrix,
    PolicyNode,
    PolicySyntaxError,
    evaluate_policy,
    parse_policy,
)
from .scheme import (
    REJECT,
    ClientCiphertext,
    ClientKey,
    DecryptionKey,
    IntersectionResult,
    MasterSecret,
    PublicParams,
    Reject,
    decrypt,
    encrypt,
    keygen,
    setup,
)
from .harness import (
    AlignmentConfig,
    AlignmentReport,
    CiphertextStore,
    ItemCodec,
    encode_item,
    make_tag,
    run_alignment,
)
from .oracle import j_set, property_corpus, sif

__all__ = [
    "AccessMatrix", "AlignmentConfig", "AlignmentReport", "CiphertextStore",
    "ClientCiphertext", "ClientKey", "DecodeError", "DecryptionKey",
    "GElem", "GHatElem", "GTElem", "GroupContext", "IntersectionResult",
    "ItemCodec", "MasterSecret", "PolicyNode", "PolicySyntaxError",
    "PublicParams", "REJECT", "Reject", "decrypt", "default_context",
    "encode_item", "encrypt", "evaluate_policy", "j_set", "keygen",
    "make_tag", "parse_policy", "property_corpus", "run_alignment",
    "setup", "sif",
]

__version__ = "0.1.0"
