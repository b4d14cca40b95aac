# utils/__init__.py
"""
Paquete de utilidades del proyecto.
Contiene el logger común del laboratorio.
"""

from .logger import get_logger
