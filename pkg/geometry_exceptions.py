class GeometryError(Exception):
    def __init__(self, message="The geometry kernel could not complete the requested operation."):
        self.message = message
        super().__init__(self.message)


class GeometryDomainError(GeometryError, ValueError):
    def __init__(self, message="A parameter, index, degree or coordinate is outside the domain the operation accepts."):
        super().__init__(message)


class InvalidGeometryOperation(GeometryError):
    def __init__(self, message="The operation cannot be applied to this geometry."):
        super().__init__(message)


class MixedSlopeRejected(GeometryError):
    def __init__(self, corners=(), norms=(), message=None):
        self.corners = tuple(corners)
        self.norms = tuple(norms)
        if message is None:
            detail = ", ".join(f"{c}: |r11|={n:.3e}" for c, n in zip(self.corners, self.norms))
            message = f"The element keeps non-zero mixed slopes and cannot be reduced to 36 d.o.f. ({detail})"
        super().__init__(message)


class ControlPolygonConditionFailed(GeometryError):
    def __init__(self, residuals=(), message=None):
        self.residuals = tuple(residuals)
        if message is None:
            detail = ", ".join(f"{r:.3e}" for r in self.residuals)
            message = f"The control polygon corners are not parallelograms (residuals: {detail})"
        super().__init__(message)


class GeometryFileError(GeometryError):
    def __init__(self, message="The geometry document could not be parsed or did not validate."):
        super().__init__(message)


class ToleranceExceeded(GeometryError):
    def __init__(self, deviation=None, tolerance=None, message=None):
        self.deviation = deviation
        self.tolerance = tolerance
        if message is None:
            message = f"Maximum deviation {deviation} exceeds the tolerance {tolerance}."
        super().__init__(message)


class UsageError(GeometryError):
    def __init__(self, message="The command line could not be understood."):
        super().__init__(message)
