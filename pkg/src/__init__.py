"""deskolem - executable deskolemization of intuitionistic natural deduction proofs."""

__version__ = "0.1.0"
