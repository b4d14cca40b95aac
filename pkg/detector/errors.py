"""Excepciones del detector."""


class DetectorError(ValueError):
    """Error base del detector."""


class TooFewRecords(DetectorError):
    """Hacen falta al menos dos telegramas para un tiempo entre llegadas."""


class EmptyResult(DetectorError):
    """La captura no cubre ni una ventana completa."""


class SpecMismatch(DetectorError):
    """Se compararon distribuciones construidas con histogramas distintos."""


class EmptySegment(DetectorError):
    """El segmento no tiene tiempos entre llegadas."""


class SingleClassTraining(DetectorError):
    """El conjunto de entrenamiento solo contiene una clase."""


class ModelFormatError(DetectorError):
    """Fichero de modelo ilegible o de una versión no soportada."""
