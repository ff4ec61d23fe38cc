# -*- coding: utf-8 -*-
# Copyright © 2020-2021 resilient-dgd authors

#######################################################################
# This Source Code Form is subject to the terms of the Mozilla Public #
# License, v. 2.0. If a copy of the MPL was not distributed with this #
# file, You can obtain one at http://mozilla.org/MPL/2.0/.            #
#######################################################################


from .filter import FilterBase


class AverageFilter(FilterBase):
    """ Plain average of all received gradients. Not fault-tolerant,
        used as fault-free baseline
    """
    class Meta:
        name = 'average'

    def _aggregate(self, bundle):
        return bundle.gradients.mean(axis=0)
