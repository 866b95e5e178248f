# Copyright 2026 pharmonic contributors
#
# Licensed under the Apache License, Version 2.0 (the "License"); you may
# not use this file except in compliance with the License. You may obtain
# a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations
# under the License.


class PharmonicError(Exception):
    pass


class GraphError(PharmonicError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = "line %d: %s" % (line, message)
        super(GraphError, self).__init__(message)


class UnknownVertex(PharmonicError):
    def __init__(self, vertex, reason=None):
        self.vertex = vertex
        message = "Unknown vertex %r" % (vertex,)
        if reason:
            message += " (%s)" % reason
        super(UnknownVertex, self).__init__(message)


class Unreachable(PharmonicError):
    def __init__(self, x, y, budget):
        self.x = x
        self.y = y
        self.budget = budget
        message = ("%r is unreachable from %r within a budget of %d vertices"
                   % (y, x, budget))
        super(Unreachable, self).__init__(message)


class ExponentError(PharmonicError):
    def __init__(self, p):
        self.p = p
        message = ("Exponent p must be a finite real greater than one, "
                   "got %r" % (p,))
        super(ExponentError, self).__init__(message)


class FieldUndefined(PharmonicError):
    def __init__(self, vertex):
        self.vertex = vertex
        message = "Field undefined at vertex %r" % (vertex,)
        super(FieldUndefined, self).__init__(message)


class DirichletError(PharmonicError):
    pass


class NotConverged(PharmonicError):
    def __init__(self, report, what='Dirichlet solve'):
        self.report = report
        message = ("%s did not converge after %d sweeps "
                   "(max residual %.3g, tolerance %.3g)"
                   % (what, report.sweeps, report.max_residual, report.tol))
        super(NotConverged, self).__init__(message)


class CapacityError(PharmonicError):
    pass


class RoydenError(PharmonicError):
    def __init__(self, message, vertex=None, value=None):
        self.vertex = vertex
        self.value = value
        super(RoydenError, self).__init__(message)


class EndError(PharmonicError):
    def __init__(self, vertex, radius, reason='has no end label'):
        self.vertex = vertex
        self.radius = radius
        message = "Sphere vertex %r at radius %d %s" % (vertex, radius, reason)
        super(EndError, self).__init__(message)


class MassiveSetError(PharmonicError):
    pass


class ConfigError(PharmonicError):
    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        message = "Invalid configuration: %s" % '; '.join(self.errors)
        super(ConfigError, self).__init__(message)
