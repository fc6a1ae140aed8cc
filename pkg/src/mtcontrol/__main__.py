import sys

from mtcontrol.cli import main

sys.exit(main())
