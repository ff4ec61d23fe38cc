# -*- coding: utf-8 -*-
# Copyright © 2020-2021 resilient-dgd authors

#######################################################################
# This Source Code Form is subject to the terms of the Mozilla Public #
# License, v. 2.0. If a copy of the MPL was not distributed with this #
# file, You can obtain one at http://mozilla.org/MPL/2.0/.            #
#######################################################################


class Error(Exception):
    """ Base class for exceptions"""
    pass


class ValidationError(Error, ValueError):
    """ Input rejected before any computation happens
        (dimension mismatch, non-finite vector, empty set, etc)
    """
    pass


class ConfigError(ValidationError):
    """ Invalid simulation or experiment configuration
    """
    pass


class FilterError(ValidationError):
    """ Gradient-filter precondition violated, or unknown filter name
    """
    pass


class DatasetError(ValidationError):
    """ Dataset file cannot be parsed

        :param str msg: error message
        :param str path: path of dataset file
        :param int lineno: 1-based line number where error occured
    """
    def __init__(self, msg, path=None, lineno=None):
        self.path = path
        self.lineno = lineno
        if lineno is not None:
            msg = u"%s:%s: %s" % (path, lineno, msg)
        elif path is not None:
            msg = u"%s: %s" % (path, msg)
        super(DatasetError, self).__init__(msg)


class NumericalError(Error):
    """ Base class for numerical failures
    """
    pass


class RankDeficientError(NumericalError):
    """ Raised when stacked design matrix is not full column rank,
        thus aggregate cost has no unique minimizer
    """
    def __init__(self, msg, subset=None):
        self.subset = subset
        super(RankDeficientError, self).__init__(msg)


class SimulationError(Error):
    """ Invalid transition of simulation state
        (for example eliminating an agent twice)
    """
    pass
