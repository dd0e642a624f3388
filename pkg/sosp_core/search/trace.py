import os
from typing import Union

import pandas as pd
from quivr import BooleanColumn, Float64Column, Int64Column, Table

__all__ = ["RunTrace", "TRACE_CSV_COLUMNS"]

TRACE_CSV_COLUMNS = [
    "g",
    "lambda",
    "profit_current",
    "profit_best",
    "structure",
    "accepted",
    "pro_1",
]


class RunTrace(Table):
    """
    One row per annealing iteration.
    """

    g = Int64Column(nullable=False)
    temperature = Float64Column(nullable=False)
    profit_current = Int64Column(nullable=False)
    profit_best = Int64Column(nullable=False)
    # 1: insertion and removal, 2: migration
    structure = Int64Column(nullable=False)
    accepted = BooleanColumn(nullable=False)
    # execution probability of insertion and removal during the iteration
    pro_1 = Float64Column(nullable=False)

    def to_dataframe(self, flatten: bool = True) -> pd.DataFrame:
        """
        Convert to a pandas DataFrame. The temperature column is named lambda.

        Parameters
        ----------
        flatten : bool
            If True, flatten any nested tables.

        Returns
        -------
        df : `~pandas.DataFrame`
            One row per iteration, columns in export order.
        """
        df = super().to_dataframe(flatten)
        df = df.rename(columns={"temperature": "lambda"})
        return df[TRACE_CSV_COLUMNS]

    def to_csv(self, path: Union[str, os.PathLike]) -> None:
        self.to_dataframe().to_csv(path, index=False, float_format="%.12g")
