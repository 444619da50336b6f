#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Error hierarchy shared by the solvers and the command line.

Every error carries a machine-readable ``code`` and the process ``exit_code``
the CLI uses when the error escapes a command.
"""


class HardyError(Exception):
    """Base class of all library errors"""

    code = 'ERROR'
    exit_code = 1

    def to_dict(self):
        return {
            'success': False,
            'error': str(self),
            'code': self.code
        }


class ValidationError(HardyError, ValueError):
    """Input outside the documented preconditions"""

    code = 'VALIDATION'
    exit_code = 2


class ParameterRangeError(ValidationError):
    """Parameters valid in themselves but outside the range an operation needs"""

    code = 'RANGE_ERROR'


class DomainError(ValidationError):
    """State or grid outside the half-space / half-line the equations live on"""

    code = 'DOMAIN_ERROR'


class NoncoerciveError(ValidationError):
    """Linear potential exceeds the Hardy bound nu^2 / r^2"""

    code = 'NONCOERCIVE'


class InsufficientGridError(ValidationError):
    """Grid too short for the requested diagnostic"""

    code = 'INSUFFICIENT_GRID'


class NonConvergenceError(HardyError):
    """Numerical procedure did not reach its target"""

    code = 'NON_CONVERGENCE'
    exit_code = 3


class AmbiguousApproachError(NonConvergenceError):
    code = 'AMBIGUOUS'


class MaxIterationsError(NonConvergenceError):
    code = 'MAX_ITERS'


class MonotonicityBrokenError(NonConvergenceError):
    code = 'MONOTONICITY_BROKEN'
