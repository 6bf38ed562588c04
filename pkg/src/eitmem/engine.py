"""Time-domain 1D Maxwell-Bloch solver for resonant EIT storage.

Weak-probe model of the Lambda system: all population stays in the probe
ground state, so only two coherences evolve per spatial slice,

    d(s12)/dt = -gamma_12 s12 + (i/2) conj(Omega_c) s13
    d(s13)/dt = -(Gamma/2) s13 + (i/2) Omega_p + (i/2) Omega_c s12

and the probe envelope obeys, in the retarded frame (t -> t - z/c),

    d(Omega_p)/dz = i (od Gamma / 2L) s13,        z in [0, L].

The field carries no time derivative in this frame, so it is slaved to the
coherence profile: at any instant Omega_p(z) follows from a cumulative
trapezoid of s13 along z.  The coherences are advanced with a classic RK4
step.  z is nondimensionalized to [0, 1]; time is in ns and rates are
converted to rad/ns internally.

Energy bookkeeping (exact for the continuum equations):

    E_in = E_out + od*Gamma * [ integral (Gamma |s13|^2 + 2 gamma_12 |s12|^2) dz dt
                                + integral (|s12|^2 + |s13|^2) dz  at t_end ]

with E = integral |Omega_p|^2 dt at the entrance/exit face.  The first
bracketed term is dissipation through the decay channels, the second is
excitation still stored in the medium when the simulation ends.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import NumericError
from .modes import EnsembleConfig
from .qubit import QubitKet

NS = 1e-9  # seconds per ns; rad/s * NS = rad/ns

RK4_STABILITY_MARGIN = 1.5
MIN_NZ = 200
MIN_SAMPLES_PER_FWHM = 40


@dataclass(frozen=True)
class Waveform:
    """Uniformly sampled complex temporal envelope.

    t0 and dt are in ns; samples hold the envelope (Rabi frequency in
    rad/s, or field amplitude in arbitrary units -- the solver is linear,
    so the overall scale cancels out of every efficiency).
    """

    t0: float
    dt: float
    samples: np.ndarray

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        arr = np.asarray(self.samples, dtype=complex)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("samples must be a non-empty 1D sequence")
        if not np.all(np.isfinite(arr.view(float))):
            raise ValueError("samples must be finite")
        object.__setattr__(self, "samples", arr)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.samples.size)

    @property
    def t_end(self) -> float:
        return self.t0 + self.dt * (self.samples.size - 1)

    def energy(self) -> float:
        """Time-integrated |envelope|^2 (arb. units * ns)."""
        return float(np.trapezoid(np.abs(self.samples) ** 2, dx=self.dt))

    def scaled(self, factor: complex) -> "Waveform":
        return Waveform(self.t0, self.dt, self.samples * factor)

    def fwhm(self) -> float:
        """Full width at half maximum of |envelope|, in ns (grid resolution)."""
        mag = np.abs(self.samples)
        half = mag.max() / 2.0
        above = np.flatnonzero(mag >= half)
        if above.size == 0:
            return 0.0
        return float((above[-1] - above[0]) * self.dt)

    def sample_at(self, t: np.ndarray) -> np.ndarray:
        """Linear interpolation onto arbitrary times; zero outside the record."""
        tt = self.times
        re = np.interp(t, tt, self.samples.real, left=0.0, right=0.0)
        im = np.interp(t, tt, self.samples.imag, left=0.0, right=0.0)
        return re + 1j * im


@dataclass(frozen=True)
class StorageProtocol:
    """Control-field switching schedule.

    control_rabi is the peak control Rabi frequency in rad/s.  The control
    ramps down over [switch_off_time - ramp_duration, switch_off_time]
    (raised cosine), stays off until switch_on_time, then ramps back up
    over [switch_on_time, switch_on_time + ramp_duration].  Times in ns.
    switch_off_time = None holds the control constant (no storage), which
    is the configuration used to validate against the transfer oracle.
    """

    control_rabi: float
    switch_off_time: Optional[float] = None
    switch_on_time: Optional[float] = None
    ramp_duration: float = 30.0

    def __post_init__(self):
        if self.control_rabi < 0:
            raise ValueError("control_rabi must be >= 0")
        if self.ramp_duration < 0:
            raise ValueError("ramp_duration must be >= 0")
        if (self.switch_off_time is None) != (self.switch_on_time is None):
            raise ValueError("switch_off_time and switch_on_time must be set together")
        if self.switch_off_time is not None and self.switch_on_time < self.switch_off_time:
            raise ValueError("switch_on_time must not precede switch_off_time")

    @property
    def storage_time(self) -> Optional[float]:
        if self.switch_off_time is None:
            return None
        return self.switch_on_time - self.switch_off_time

    def control_factor(self, t: np.ndarray) -> np.ndarray:
        """Dimensionless control envelope in [0, 1] at times t (ns)."""
        t = np.asarray(t, dtype=float)
        if self.switch_off_time is None:
            return np.ones_like(t)
        t_off, t_on, ramp = self.switch_off_time, self.switch_on_time, self.ramp_duration
        out = np.ones_like(t)
        if ramp > 0:
            down = (t > t_off - ramp) & (t < t_off)
            out[down] = 0.5 * (1.0 + np.cos(np.pi * (t[down] - (t_off - ramp)) / ramp))
            up = (t > t_on) & (t < t_on + ramp)
            out[up] = 0.5 * (1.0 - np.cos(np.pi * (t[up] - t_on) / ramp))
        out[(t >= t_off) & (t <= t_on)] = 0.0
        return out


@dataclass(frozen=True)
class SolverGrid:
    """Discretization: nz spatial slices over [0, L], time step dt (ns).

    t_start / t_end default to the probe record start and a window that
    comfortably contains the retrieval; override for long transparency runs.
    """

    nz: int = 300
    dt: float = 0.4
    t_start: Optional[float] = None
    t_end: Optional[float] = None
    capture_fields: bool = False
    snapshot_stride: int = 16

    def coarse(self) -> "SolverGrid":
        """Half-resolution variant used during optimization searches."""
        return SolverGrid(
            nz=max(MIN_NZ, self.nz // 2),
            dt=self.dt * 2,
            t_start=self.t_start,
            t_end=self.t_end,
        )


@dataclass(frozen=True)
class MemoryResult:
    """Outcome of one storage-and-retrieval run (energies in arb. units * ns)."""

    input_energy: float
    transmitted_energy: float
    retrieved_energy: float
    dissipated_energy: float
    decay_loss_energy: float
    residual_energy: float
    se: float
    retrieved_waveform: Waveform
    exit_waveform: Waveform
    od: float
    field_snapshots: Optional[list] = field(default=None, repr=False)


def truncated_gaussian(
    fwhm: float,
    truncation_fraction: float,
    total_duration: float,
    dt: float = 0.4,
    t0: float = 0.0,
) -> Waveform:
    """Gaussian probe envelope cut off on its trailing edge.

    The Gaussian peaks at the center of the record; the envelope is zeroed
    once its trailing amplitude falls to truncation_fraction of the peak.
    truncation_fraction = 1 cuts at the peak (half-Gaussian); values
    approaching 0 leave the Gaussian untouched.  Peak amplitude is 1.
    """
    if total_duration <= 0:
        raise ValueError("total_duration must be positive")
    if fwhm <= 0:
        raise ValueError("fwhm must be positive")
    if not 0 < truncation_fraction <= 1:
        raise ValueError("truncation_fraction must be in (0, 1]")
    sigma = fwhm / (2.0 * np.sqrt(2.0 * np.log(2.0)))
    n = int(round(total_duration / dt)) + 1
    t = t0 + dt * np.arange(n)
    t_peak = t0 + total_duration / 2.0
    env = np.exp(-((t - t_peak) ** 2) / (2.0 * sigma**2)).astype(complex)
    t_cut = t_peak + sigma * np.sqrt(2.0 * np.log(1.0 / truncation_fraction))
    env[t > t_cut] = 0.0
    return Waveform(t0, dt, env)


def transmission_transfer(delta, od: float, ens: EnsembleConfig, omega_c: float):
    """Frequency-domain amplitude transfer coefficient of the EIT medium.

    For a constant control field the linear response gives

        T(delta) = exp[ -(od Gamma / 4) (gamma_12 + i delta)
                        / ((Gamma/2 + i delta)(gamma_12 + i delta) + |Omega_c|^2/4) ]

    derived from the same coherence equations the time-domain solver
    integrates, with the spectrum convention of numpy.fft (component
    exp(+i delta t) in the inverse transform), so the group delay is
    -d(arg T)/d(delta).  On resonance with gamma_12 = 0 this gives |T| = 1;
    with the control off it reduces to Beer-Lambert, |T| = exp(-od/2).
    delta and omega_c in rad/s; delta may be an array.
    """
    delta = np.asarray(delta, dtype=float)
    gm, g12 = ens.gamma_e, ens.gamma_12
    if omega_c == 0.0:
        # the (gamma_12 + i delta) factor cancels exactly
        expo = -(od * gm / 4.0) / (gm / 2.0 + 1j * delta)
    else:
        num = g12 + 1j * delta
        den = (gm / 2.0 + 1j * delta) * num + abs(omega_c) ** 2 / 4.0
        expo = -(od * gm / 4.0) * num / den
    out = np.exp(expo)
    return out if out.ndim else complex(out)


def group_delay(od: float, ens: EnsembleConfig, omega_c: float, ddelta: float = 1e3) -> float:
    """Group delay -d(arg T)/d(delta) at resonance, in seconds."""
    t_plus = transmission_transfer(ddelta, od, ens, omega_c)
    t_minus = transmission_transfer(-ddelta, od, ens, omega_c)
    return float(-(np.angle(t_plus) - np.angle(t_minus)) / (2.0 * ddelta))


def _cumtrapz(y: np.ndarray, dz: float, out: np.ndarray) -> np.ndarray:
    out[0] = 0.0
    np.cumsum(y[1:] + y[:-1], out=out[1:])
    out[1:] *= 0.5 * dz
    return out


def simulate_storage(
    probe: Waveform,
    proto: StorageProtocol,
    od: float,
    ens: EnsembleConfig,
    grid: SolverGrid = SolverGrid(),
) -> MemoryResult:
    """Run the storage protocol and report energies, SE and exit waveforms.

    od is the effective optical depth for the mode being stored (use
    modes.effective_od to derive it); ens supplies the rates.  Deterministic
    for fixed inputs.  Raises NumericError on a stability violation or a
    non-finite field, ValueError when the grid does not resolve the probe
    (>= 40 samples per FWHM) or the medium (nz >= 200).
    """
    if od < 0:
        raise ValueError("od must be >= 0")
    if grid.nz < MIN_NZ:
        raise ValueError(f"grid must resolve the medium: nz >= {MIN_NZ}, got {grid.nz}")
    probe_fwhm = probe.fwhm()
    if probe_fwhm > 0 and probe_fwhm / grid.dt < MIN_SAMPLES_PER_FWHM:
        raise ValueError(
            f"grid must resolve the pulse: need >= {MIN_SAMPLES_PER_FWHM} samples per "
            f"probe FWHM ({probe_fwhm:.1f} ns), got dt = {grid.dt} ns"
        )

    gm = ens.gamma_e * NS  # rad/ns
    g12 = ens.gamma_12 * NS
    oc_peak = proto.control_rabi * NS

    # explicit-RK4 stability estimate: coherence decay + control oscillation
    # + the collective absorption rate concentrated on one trapezoid cell
    rate = gm / 2.0 + g12 + oc_peak / 2.0 + od * gm / (8.0 * grid.nz)
    if rate * grid.dt > RK4_STABILITY_MARGIN:
        raise NumericError(
            f"time step dt = {grid.dt} ns violates the explicit stability bound "
            f"(rate * dt = {rate * grid.dt:.3f} > {RK4_STABILITY_MARGIN}); "
            f"reduce dt below {RK4_STABILITY_MARGIN / rate:.4f} ns"
        )

    t_start = probe.t0 if grid.t_start is None else grid.t_start
    if grid.t_end is not None:
        t_end = grid.t_end
    else:
        span = probe.t_end - probe.t0
        if proto.switch_on_time is not None:
            t_end = proto.switch_on_time + proto.ramp_duration + 3.0 * span
        else:
            t_end = probe.t_end + 3.0 * span
    nt = int(np.ceil((t_end - t_start) / grid.dt))
    if nt < 2:
        raise ValueError("simulation window is empty; check t_start/t_end")

    dt = grid.dt
    times = t_start + dt * np.arange(nt + 1)
    half_times = t_start + 0.5 * dt * np.arange(2 * nt + 1)
    # probe samples are arbitrary linear units; the model is linear in the
    # probe, so every reported efficiency is independent of this scale
    probe_half = probe.sample_at(half_times)
    oc_half = oc_peak * proto.control_factor(half_times)

    nz = grid.nz
    dz = 1.0 / nz
    coupling = 0.5j * od * gm  # i * od * Gamma / 2, per unit (nondimensional) length

    s12 = np.zeros(nz + 1, dtype=complex)
    s13 = np.zeros(nz + 1, dtype=complex)
    zbuf = np.empty(nz + 1, dtype=complex)

    def rhs(s12_v, s13_v, amp_in, oc):
        field = amp_in + coupling * _cumtrapz(s13_v, dz, zbuf)
        d12 = -g12 * s12_v + 0.5j * np.conj(oc) * s13_v
        d13 = -(gm / 2.0) * s13_v + 0.5j * field + 0.5j * oc * s12_v
        return d12, d13, field

    exit_field = np.empty(nt + 1, dtype=complex)
    diss_rate = np.empty(nt + 1, dtype=float)
    snapshots = [] if grid.capture_fields else None

    def z_trapz(values: np.ndarray) -> float:
        return float((values.sum() - 0.5 * (values[0] + values[-1])) * dz)

    for n in range(nt):
        a12, a13, f1 = rhs(s12, s13, probe_half[2 * n], oc_half[2 * n])
        exit_field[n] = f1[-1]
        diss_rate[n] = od * gm * (
            gm * z_trapz(np.abs(s13) ** 2) + 2.0 * g12 * z_trapz(np.abs(s12) ** 2)
        )
        if snapshots is not None and n % grid.snapshot_stride == 0:
            snapshots.append((times[n], f1.copy()))

        b12, b13, _ = rhs(s12 + 0.5 * dt * a12, s13 + 0.5 * dt * a13,
                          probe_half[2 * n + 1], oc_half[2 * n + 1])
        c12, c13, _ = rhs(s12 + 0.5 * dt * b12, s13 + 0.5 * dt * b13,
                          probe_half[2 * n + 1], oc_half[2 * n + 1])
        d12, d13, _ = rhs(s12 + dt * c12, s13 + dt * c13,
                          probe_half[2 * n + 2], oc_half[2 * n + 2])
        s12 = s12 + (dt / 6.0) * (a12 + 2.0 * b12 + 2.0 * c12 + d12)
        s13 = s13 + (dt / 6.0) * (a13 + 2.0 * b13 + 2.0 * c13 + d13)

        if n % 128 == 0 and not np.isfinite(s13[-1]):
            raise NumericError(f"field blew up at t = {times[n]:.2f} ns (step {n})")

    _, _, f_final = rhs(s12, s13, probe_half[-1], oc_half[-1])
    exit_field[nt] = f_final[-1]
    diss_rate[nt] = od * gm * (
        gm * z_trapz(np.abs(s13) ** 2) + 2.0 * g12 * z_trapz(np.abs(s12) ** 2)
    )
    if not np.all(np.isfinite(exit_field.view(float))):
        bad = np.flatnonzero(~np.isfinite(exit_field))[0]
        raise NumericError(f"field blew up at t = {times[bad]:.2f} ns")

    input_signal = probe.sample_at(times)
    input_energy = float(np.trapezoid(np.abs(input_signal) ** 2, dx=dt))
    total_exit = float(np.trapezoid(np.abs(exit_field) ** 2, dx=dt))

    if proto.switch_on_time is not None:
        i_on = int(np.searchsorted(times, proto.switch_on_time - 1e-9))
        i_on = min(max(i_on, 0), nt)
        retrieved = float(np.trapezoid(np.abs(exit_field[i_on:]) ** 2, dx=dt))
        retrieved_wave = Waveform(times[i_on], dt, exit_field[i_on:].copy())
    else:
        retrieved = 0.0
        retrieved_wave = Waveform(times[-1], dt, np.zeros(1, dtype=complex))
    transmitted = total_exit - retrieved

    decay_loss = float(np.trapezoid(diss_rate, dx=dt))
    residual = od * gm * z_trapz(np.abs(s12) ** 2 + np.abs(s13) ** 2)
    se = retrieved / input_energy if input_energy > 0 else 0.0

    snap_rows = None
    if snapshots is not None:
        snap_rows = [
            (t, k, f[k].real, f[k].imag)
            for t, f in snapshots
            for k in range(0, nz + 1)
        ]

    return MemoryResult(
        input_energy=input_energy,
        transmitted_energy=transmitted,
        retrieved_energy=retrieved,
        dissipated_energy=decay_loss + residual,
        decay_loss_energy=decay_loss,
        residual_energy=residual,
        se=float(se),
        retrieved_waveform=retrieved_wave,
        exit_waveform=Waveform(times[0], dt, exit_field),
        od=od,
        field_snapshots=snap_rows,
    )


def store_qubit(
    ket: QubitKet, eta_g: float, eta_r: float, dphi: float = 0.0
) -> tuple[QubitKet, float]:
    """Compose per-mode retrieval into the conditional output qubit.

    output ~ (amp_g sqrt(eta_g), amp_r e^{i dphi} sqrt(eta_r)), renormalized;
    overall efficiency is |amp_g|^2 eta_g + |amp_r|^2 eta_r.  Raises
    ValueError when both efficiencies vanish (nothing retrieved).
    """
    if not 0 <= eta_g <= 1 or not 0 <= eta_r <= 1:
        raise ValueError("efficiencies must lie in [0, 1]")
    overall = abs(ket.amp_g) ** 2 * eta_g + abs(ket.amp_r) ** 2 * eta_r
    if overall <= 0:
        raise ValueError("both retrieval efficiencies are zero; nothing retrieved")
    g = ket.amp_g * np.sqrt(eta_g)
    r = ket.amp_r * np.exp(1j * dphi) * np.sqrt(eta_r)
    norm = np.sqrt(abs(g) ** 2 + abs(r) ** 2)
    return QubitKet(g / norm, r / norm), float(overall)
