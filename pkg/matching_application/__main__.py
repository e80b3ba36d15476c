import sys

from matching_application.cli import main

sys.exit(main())
