"""Error types raised across the package.

Every domain error derives from LinkError so the CLI can map any of them to
exit code 2 and report the class name.
"""

from __future__ import annotations


class LinkError(Exception):
    """Base class for all domain errors."""

    @property
    def name(self) -> str:
        return type(self).__name__


class SyntaxError(LinkError):  # noqa: A001 - deliberate domain name, always used qualified
    """Malformed tree-pair or diagram text."""


class LeafMismatch(LinkError):
    """Tree pair whose two trees have different leaf counts."""


class NonPlanar(LinkError):
    """Rotation system whose Euler characteristic is not spherical."""


class ValidationError(LinkError):
    """Structurally inconsistent diagram data."""


class NotOrientable(LinkError):
    """The face-direction rule conflicts along some strand."""


class NotOriented(LinkError):
    """An operation needing an orientation was given an unoriented diagram."""


class BadBasepoint(LinkError):
    """Basepoint arc not on the relevant unbounded face."""


class TooLarge(LinkError):
    """Refused a computation beyond the documented size bound."""


class BadSite(LinkError):
    """Move site does not match the required local pattern."""


class InvalidCertificate(LinkError):
    """Certificate replay failed or endpoints do not match."""


class AlreadyHasLeafArc(LinkError):
    """Leaf-arc move requested for a component that already has a leaf-arc."""


class NotInImage(LinkError):
    """Post-surgery diagram failed the structural image-of-L check."""


class NotALeafArc(LinkError):
    """Gadget insertion requested at an arc that is not a leaf-arc."""


class ParityObstruction(LinkError):
    """Requested writhe/index target has the wrong parity."""


class NoLeafArc(LinkError):
    """A component that needs a leaf-arc has none."""


class UnsupportedDiagram(LinkError):
    """Operation undefined for this diagram shape (documented desk-scale limits)."""
