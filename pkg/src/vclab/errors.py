"""Exception hierarchy. Every error carries the name of the module that raised it."""


class VclabError(Exception):
    module = "vclab"

    def __str__(self):
        return f"[{self.module}] {type(self).__name__}: {super().__str__()}"


class PencilError(VclabError):
    module = "pencil"


class SingularCurve(PencilError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class DegenerateInput(PencilError):
    pass


class NonLefschetzPencil(PencilError):
    pass


class NumericalDegeneracy(PencilError):
    pass


class MonodromyError(VclabError):
    module = "monodromy"


class PathTooClose(MonodromyError):
    pass


class TrackingCollision(MonodromyError):
    pass


class NonTransitive(MonodromyError):
    pass


class CoverError(VclabError):
    module = "covertop"


class InconsistentMonodromy(CoverError):
    pass


class NonUnimodularPairing(CoverError):
    pass


class NotInStabilizer(VclabError):
    module = "tube"


class ZeroVector(VclabError):
    module = "lattice"


class JacobianError(VclabError):
    module = "jacobian"


class QuadratureFailure(JacobianError):
    pass


class RiemannRelationViolation(JacobianError):
    pass


class RankDeficient(JacobianError):
    def __init__(self, msg, null_vector=None):
        super().__init__(msg)
        self.null_vector = null_vector


class NetGeomError(VclabError):
    module = "netgeom"


class BadPair(NetGeomError):
    pass


class UnsupportedOrder(NetGeomError):
    pass
