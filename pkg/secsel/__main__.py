import sys

from secsel.cli import main

sys.exit(main())
