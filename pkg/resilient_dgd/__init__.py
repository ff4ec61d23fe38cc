# -*- coding: utf-8 -*-
# Copyright © 2020-2021 resilient-dgd authors

#######################################################################
# This Source Code Form is subject to the terms of the Mozilla Public #
# License, v. 2.0. If a copy of the MPL was not distributed with this #
# file, You can obtain one at http://mozilla.org/MPL/2.0/.            #
#######################################################################


from .costmodel import (QuadraticCost,         # noqa
                        BlockQuadraticCost,    # noqa
                        aggregate_minimizer,   # noqa
                        curvature)             # noqa
from .filters import (GradientBundle,          # noqa
                      apply_filter)            # noqa
from .redundancy import measure_redundancy     # noqa
from .resilient import (SubmittedCosts,        # noqa
                        resilient_solve)       # noqa
from .simengine import (SimConfig,             # noqa
                        run_dgd)               # noqa
from .experiment import load_dataset           # noqa

from . import version

__version__ = version.version
