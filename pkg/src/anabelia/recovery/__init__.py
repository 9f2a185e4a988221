"""Recovery of field embeddings from multiplicative unit-group data."""

from .engine import (Collision, FieldEmbedding, RecoveryTranscript, RingHom, VerifyReport,
                     audit_constant_additivity, bucket_bound, conjugate_oracle,
                     find_collision_pair, recover_constant_additivity, recover_field_embedding,
                     recover_ring_hom, spot_check, verify_embedding)
from .oracle import (ADVERSARIAL_KINDS, EmbeddingOracle, Tau, adversarial_oracle,
                     oracle_from_embedding, oracle_from_params, random_exceptional_set,
                     random_mobius, random_oracle)

__all__ = [
    "ADVERSARIAL_KINDS", "Collision", "EmbeddingOracle", "FieldEmbedding", "RecoveryTranscript",
    "RingHom", "Tau", "VerifyReport", "adversarial_oracle", "audit_constant_additivity",
    "bucket_bound", "conjugate_oracle", "find_collision_pair", "oracle_from_embedding",
    "oracle_from_params", "random_exceptional_set", "random_mobius", "random_oracle",
    "recover_constant_additivity", "recover_field_embedding", "recover_ring_hom", "spot_check",
    "verify_embedding",
]
