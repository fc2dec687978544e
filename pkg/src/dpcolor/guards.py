"""Enumeration ceilings. Both may be overridden per call or from the CLI."""

from .errors import InstanceTooLarge

#: Largest number of grid points / colourings any exhaustive routine may visit.
MAX_STATES = 10**7

#: Largest number of gauge-fixed covers an exact search may examine.
MAX_COVERS = 10**6


def check_states(what, size, limit=MAX_STATES):
    if limit is not None and size > limit:
        raise InstanceTooLarge(what, size, limit)
