"""
Modelo HVAC concentrado de una sala.

La potencia total es la suma de ventiladores, bomba de agua fría y
enfriadora. El control solo ve la temperatura notificada por el sensor; la
temperatura real evoluciona con la envolvente y el frío que entrega la batería.
"""

import math
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, Optional

from .errors import NonFiniteState

CP_WATER = 4186.0          # J/(kg·K)
SECONDS_PER_KWH = 3.6e6


@dataclass(frozen=True)
class PowerMap:
    """Mapa afín más cuadrático, nunca negativo y no decreciente: idle + a·d + b·d², d = max(0, x − ref)."""

    idle: float
    linear: float
    quadratic: float
    reference: float = 0.0

    def __post_init__(self):
        if min(self.idle, self.linear, self.quadratic) < 0:
            raise ValueError(f"Los coeficientes de potencia deben ser >= 0: {self}")

    def __call__(self, x: float) -> float:
        d = max(0.0, x - self.reference)
        return self.idle + self.linear * d + self.quadratic * d * d

    @classmethod
    def from_value(cls, value: Any) -> "PowerMap":
        if isinstance(value, PowerMap):
            return value
        if isinstance(value, dict):
            return cls(**value)
        return cls(*value)


@dataclass(frozen=True)
class HvacParams:
    room_setpoint: float = 22.0
    supply_air_setpoint: float = 14.0
    supply_water_setpoint: float = 6.0
    damper_fraction: float = 0.3
    thermal_capacitance: float = 1.5e8
    envelope_conductance: float = 15000.0
    ventilation_conductance: float = 10000.0
    initial_room_temperature: float = 21.0
    kp: float = 5.0
    ki: float = 0.02
    effort_max: float = 3.0
    k_sa: float = 1.0
    k_m: float = 8.0
    m0: float = 0.0
    air_side_conductance: float = 60000.0
    fan: PowerMap = field(default_factory=lambda: PowerMap(15000.0, 2000.0, 300.0, 16.0))
    pump: PowerMap = field(default_factory=lambda: PowerMap(3000.0, 4000.0, 500.0, 14.0))
    chiller: PowerMap = field(default_factory=lambda: PowerMap(10000.0, 3000.0, 60.0, 0.0))
    step: float = 60.0

    def __post_init__(self):
        if self.thermal_capacitance <= 0:
            raise ValueError("La capacidad térmica debe ser positiva")
        if self.envelope_conductance < 0 or self.ventilation_conductance < 0:
            raise ValueError("Las conductancias no pueden ser negativas")
        if self.step <= 0:
            raise ValueError("El paso de integración debe ser positivo")
        if not 0.0 <= self.damper_fraction <= 1.0:
            raise ValueError(f"Apertura de compuerta fuera de [0, 1]: {self.damper_fraction}")
        for name in ("fan", "pump", "chiller"):
            object.__setattr__(self, name, PowerMap.from_value(getattr(self, name)))

    @property
    def conductance(self) -> float:
        """Conductancia efectiva: envolvente más aire exterior según la compuerta."""
        return self.envelope_conductance + self.damper_fraction * self.ventilation_conductance

    def idle_power(self) -> float:
        """Potencia con la sala notificada en consigna y sin demanda de frío."""
        return self.fan(self.room_setpoint) + self.pump(self.supply_air_setpoint) + self.chiller(self.m0)

    @classmethod
    def from_dict(cls, data: Optional[Dict[str, Any]]) -> "HvacParams":
        known = {f.name for f in fields(cls)}
        return cls(**{key: value for key, value in (data or {}).items() if key in known})

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class HvacState:
    time: float
    T_r: float
    T_r_reported: float = float("nan")
    T_sa: float = 14.0
    m_chw: float = 0.0
    P_fan: float = 0.0
    P_pump: float = 0.0
    P_chiller: float = 0.0
    P_total: float = 0.0
    E_total: float = 0.0
    E_fan: float = 0.0
    E_pump: float = 0.0
    E_chiller: float = 0.0
    integral: float = 0.0
    step_index: int = 0

    @classmethod
    def initial(cls, params: HvacParams, time: float = 0.0) -> "HvacState":
        return cls(time=time, T_r=params.initial_room_temperature, T_sa=params.supply_air_setpoint, m_chw=params.m0)


def hvac_step(state: HvacState, params: HvacParams, ambient: float, reported_T: float) -> HvacState:
    """
    Avanza un paso de Euler explícito.

    Args:
        state: Estado al inicio del paso
        params: Parámetros del edificio y del control
        ambient: Temperatura exterior durante el paso (°C)
        reported_T: Temperatura de sala que cree el controlador (°C)

    Returns:
        Estado al final del paso, con las potencias usadas durante él

    Raises:
        NonFiniteState: Si cualquier magnitud deja de ser finita
    """
    set_error = reported_T - params.room_setpoint
    error = max(0.0, set_error)
    integral = min(max(state.integral + params.ki * set_error * params.step, 0.0), params.effort_max)
    effort = min(params.kp * error + integral, params.effort_max)

    T_sa = params.supply_air_setpoint + params.k_sa * effort
    m_chw = params.m0 + params.k_m * max(0.0, T_sa - params.supply_air_setpoint)

    P_fan = params.fan(reported_T)
    P_pump = params.pump(T_sa)
    P_chiller = params.chiller(m_chw)
    P_total = P_fan + P_pump + P_chiller

    q_coil = max(0.0, CP_WATER * m_chw * (T_sa - params.supply_water_setpoint))
    q_cool = min(q_coil, params.air_side_conductance * max(0.0, state.T_r - T_sa))
    dT = params.step / params.thermal_capacitance * (params.conductance * (ambient - state.T_r) - q_cool)

    to_kwh = params.step / SECONDS_PER_KWH
    next_state = HvacState(
        time=state.time + params.step,
        T_r=state.T_r + dT,
        T_r_reported=reported_T,
        T_sa=T_sa,
        m_chw=m_chw,
        P_fan=P_fan,
        P_pump=P_pump,
        P_chiller=P_chiller,
        P_total=P_total,
        E_total=state.E_total + P_total * to_kwh,
        E_fan=state.E_fan + P_fan * to_kwh,
        E_pump=state.E_pump + P_pump * to_kwh,
        E_chiller=state.E_chiller + P_chiller * to_kwh,
        integral=integral,
        step_index=state.step_index + 1,
    )
    if not all(math.isfinite(getattr(next_state, f.name)) for f in fields(HvacState)):
        raise NonFiniteState(next_state.step_index, asdict(next_state))
    return next_state

