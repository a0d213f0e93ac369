"""Exception types shared across the package."""


class WeilsumsError(Exception):
    """Base class for all library errors."""


class NotPrime(WeilsumsError):
    """The requested characteristic is not a prime number."""


class ReducibleModulus(WeilsumsError):
    """The supplied modulus polynomial factors over the prime field."""


class DegreeMismatch(WeilsumsError):
    """The supplied modulus is not monic of the requested degree."""


class FieldTooLarge(WeilsumsError):
    """Field order exceeds the supported table-driven range (2**20)."""


class ZeroInverse(WeilsumsError):
    """Inversion (or a negative power) of the zero element."""


class NotASubfield(WeilsumsError):
    """The claimed subfield relation does not hold."""


class NotCoprime(WeilsumsError):
    """Exponent shares a factor with the unit group order."""


class OddDegree(WeilsumsError):
    """Operation requires an even extension degree."""


class OrderMismatch(WeilsumsError):
    """Cyclotomic operands live in rings of different root orders."""


class NotAUnit(WeilsumsError):
    """Galois substitution index is not invertible modulo the root order."""


class OrderNotPrime(WeilsumsError):
    """Valuation is only defined on prime root orders."""


class NotQuadratic(WeilsumsError):
    """Operation requires a quadratic extension."""


class DegeneracyMismatch(WeilsumsError):
    """Exponent degeneracy flags do not match the operation's hypothesis."""


class BadExtensionDegree(WeilsumsError):
    """Extension degree is not a prime power coprime to the characteristic."""


class NotSymmetricThreeValued(WeilsumsError):
    """Check requires a symmetric three-valued spectrum."""


class NotRealElement(WeilsumsError):
    """Sign evaluation requires a real cyclotomic integer."""
