import sys

from xcubeprep.cli import main

sys.exit(main())
