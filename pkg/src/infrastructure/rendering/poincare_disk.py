"""
Retrato de fase no disco de Poincaré em SVG.

O plano é comprimido por r ↦ r/(1+r) apenas para desenho; o círculo
unitário representa o infinito.
"""

import math
from pathlib import Path
from typing import Iterable, Optional, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from loguru import logger  # noqa: E402
from matplotlib.patches import Circle  # noqa: E402

from src.core.config import get_settings  # noqa: E402
from src.core.exceptions import OracleError, RenderError  # noqa: E402
from src.domain.models import (  # noqa: E402
    AngularStability,
    GlobalPortrait,
    StarField,
    TWO_PI,
    TopoType,
)
from src.infrastructure.oracle.trajectories import integrate_cartesian  # noqa: E402

BOUNDARY_GID = "boundary-circle"

_MARKERS = {
    AngularStability.ATTRACTING: dict(marker="o", markerfacecolor="black", fillstyle="full"),
    AngularStability.REPELLING: dict(marker="o", markerfacecolor="white", fillstyle="full"),
    AngularStability.SEMI_STABLE: dict(marker="o", markerfacecolor="black", fillstyle="left"),
}

_FINITE_MARKERS = {
    TopoType.NODE_ATTRACTOR: dict(marker="o", markerfacecolor="black", fillstyle="full"),
    TopoType.NODE_REPELLOR: dict(marker="o", markerfacecolor="white", fillstyle="full"),
    TopoType.SADDLE: dict(marker="X", markerfacecolor="black", fillstyle="full"),
    TopoType.SADDLE_NODE: dict(marker="o", markerfacecolor="black", fillstyle="left"),
}


def compress(xs: np.ndarray, ys: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(x, y) ↦ (x, y)/(1 + r)"""
    factor = 1.0 / (1.0 + np.hypot(xs, ys))
    return xs * factor, ys * factor


def _polar_points(points: Iterable[Tuple[float, float]]) -> Tuple[np.ndarray, np.ndarray]:
    theta, radius = (np.array(v, dtype=float) for v in zip(*points))
    return compress(radius * np.cos(theta), radius * np.sin(theta))


def _draw_trajectories(ax, field: StarField, samples: int, seed: int, scale: float) -> int:
    settings = get_settings()
    rng = np.random.default_rng(seed)
    drawn = 0
    for _ in range(samples):
        phi = rng.uniform(0.0, TWO_PI)
        radius = rng.uniform(0.05, 3.0) * scale
        try:
            trajectory = integrate_cartesian(
                field, radius * math.cos(phi), radius * math.sin(phi),
                settings.verify_t_end, escape_radius=settings.escape_radius,
            )
        except OracleError as exc:
            logger.debug(f"Skipping trajectory from phi={phi:.3f}: {exc.message}")
            continue
        xs, ys = compress(np.array(trajectory.xs), np.array(trajectory.ys))
        ax.plot(xs, ys, color="steelblue", linewidth=0.6, alpha=0.8)
        drawn += 1
    return drawn


def render_portrait(
    field: StarField,
    portrait: GlobalPortrait,
    path: Path,
    samples: int = 12,
    seed: Optional[int] = None
) -> Path:
    """
    Desenha equilíbrios, diâmetros invariantes, ciclo ou policiclo e
    trajetórias amostradas; salva em SVG determinístico.

    Raises:
        RenderError: falha ao desenhar ou gravar o arquivo
    """
    path = Path(path)
    seed = get_settings().seed if seed is None else seed
    plt.rcParams["svg.hashsalt"] = f"portrait-{seed}"

    fig, ax = plt.subplots(figsize=(6, 6))
    try:
        ax.set_aspect("equal")
        ax.set_xlim(-1.08, 1.08)
        ax.set_ylim(-1.08, 1.08)
        ax.axis("off")

        continuum = portrait.continuum
        boundary = Circle(
            (0.0, 0.0), 1.0, fill=False, color="black", linewidth=1.2,
            linestyle=":" if continuum is not None else "-",
        )
        boundary.set_gid(BOUNDARY_GID)
        ax.add_patch(boundary)

        for eq in portrait.infinite:
            c, s = math.cos(eq.theta), math.sin(eq.theta)
            ax.plot([0.0, c], [0.0, s], color="gray", linewidth=0.8)
            style = _MARKERS[eq.stability.angular] if eq.stability else _MARKERS[AngularStability.SEMI_STABLE]
            ax.plot([c], [s], markersize=7, markeredgecolor="black", linestyle="none", **style)

        for fe in portrait.finite:
            xs, ys = compress(np.array([fe.x]), np.array([fe.y]))
            ax.plot(xs, ys, markersize=7, markeredgecolor="black", linestyle="none",
                    **_FINITE_MARKERS[fe.topo_type])

        if continuum is not None and continuum.profile:
            xs, ys = _polar_points(continuum.profile)
            ax.plot(xs, ys, linestyle="none", marker=".", markersize=1.5, color="black")

        scale = max([1.0] + [fe.r0 for fe in portrait.finite])
        if portrait.located_cycle is not None:
            xs, ys = _polar_points(portrait.located_cycle.samples + portrait.located_cycle.samples[:1])
            ax.plot(xs, ys, color="crimson", linewidth=1.6)
            scale = max(scale, portrait.located_cycle.radius)

        drawn = _draw_trajectories(ax, field, samples, seed, scale)

        origin_fill = "black" if field.lam < 0 else "white"
        ax.plot([0.0], [0.0], marker="o", markersize=6, markerfacecolor=origin_fill,
                markeredgecolor="black", linestyle="none")

        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format="svg", metadata={"Date": None})
    except (OSError, ValueError, RuntimeError) as exc:
        raise RenderError(str(path), str(exc)) from exc
    finally:
        plt.close(fig)

    logger.info(f"Portrait written to {path} ({drawn} trajectories)")
    return path
