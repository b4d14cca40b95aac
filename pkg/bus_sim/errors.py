"""Excepciones del simulador de bus."""


class BusSimError(ValueError):
    """Error base del simulador."""


class UnknownSegment(BusSimError):
    """El segmento pedido no existe en la simulación."""


class UndecodablePayload(BusSimError):
    """El controlador recibió un valor que no sabe interpretar como temperatura."""
