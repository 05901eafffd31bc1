from pebbling.graph import Dag
