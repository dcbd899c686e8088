import sys

from planedom.cli import main

sys.exit(main())
