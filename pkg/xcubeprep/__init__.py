# pylint:disable=C0111

__title__ = "xcubeprep"
__version__ = "0.3.0"
__author__ = "xcubeprep developers"
__license__ = "Apache License, Version 2.0"
__copyright__ = "Copyright (c) 2025 xcubeprep developers"
