import sys

from gtlab.cli import main

sys.exit(main())
