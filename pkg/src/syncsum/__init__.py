"""Running sums of automatic sequences: synchronisation proofs and disproofs."""

__version__ = "0.1.0"
