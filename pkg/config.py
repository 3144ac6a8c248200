import os
from dotenv import load_dotenv

load_dotenv()

LOG_LEVEL = os.getenv("BOXLAB_LOG_LEVEL", "WARNING").upper()

# Параметры численных методов (флаги CLI имеют приоритет)
QUAD_ORDER = int(os.getenv("BOXLAB_QUAD_ORDER", 128))
ROOT_TOL = float(os.getenv("BOXLAB_ROOT_TOL", 1e-8))
MAX_ITER = int(os.getenv("BOXLAB_MAX_ITER", 200))
IDEM_GRID = int(os.getenv("BOXLAB_IDEM_GRID", 1_000_000))
SWEEP_WORKERS = int(os.getenv("BOXLAB_SWEEP_WORKERS", 4))

# Допуски
NORM_TOL = 1e-9
CLAMP_TOL = 1e-12
NS_TOL = 1e-7
FACET_TOL = 1e-9
# CHSH - сумма 16 вероятностей с коэффициентами +-1: невязка delta сдвигает её не более чем на 16 delta
LP_RESIDUAL_TOL = FACET_TOL / 16
BOX_EQ_TOL = 1e-9
QUAD_CONV_TOL = 1e-8
LABEL_TOL = 1e-12

# Значения по умолчанию для уравнения границы
DEFAULT_T = 1.0
DEFAULT_Y = 2.0
DEFAULT_TARGET = 4.0
TSIRELSON = 2 * 2 ** 0.5
