import sys

from expressive_vc.cli import main

sys.exit(main())
