import json

import openpyxl

from exportador import ExportadorExcel, escribir_csv, escribir_json, leer_csv
from oraculos import InformeCota


def test_csv_con_huella_y_comentarios(tmp_path):
    ruta = tmp_path / "sub" / "cola.csv"
    escribir_csv(str(ruta), ("T", "p_hat"), [(1.0, 0.1), (2.0, 1.0 / 3.0)], "00ff", ["exponent=-2"])
    lineas = ruta.read_text(encoding="utf-8").splitlines()
    assert lineas[0] == "# huella=00ff"
    assert lineas[1] == "# exponent=-2"
    huella, encabezados, filas = leer_csv(str(ruta))
    assert huella == "00ff"
    assert encabezados == ["T", "p_hat"]
    assert float(filas[1][1]) == 1.0 / 3.0


def test_json_de_cotas(tmp_path):
    ruta = tmp_path / "cotas.json"
    escribir_json(str(ruta), [InformeCota("K", 4.5, 1e-9, {"beta": 1.0})], "abcd")
    contenido = json.loads(ruta.read_text(encoding="utf-8"))
    assert contenido["fingerprint"] == "abcd"
    assert contenido["reports"] == [{"name": "K", "value": 4.5, "tol": 1e-9, "inputs": {"beta": 1.0}}]


def test_libro_excel(tmp_path):
    ruta = tmp_path / "resultados.xlsx"
    exportador = ExportadorExcel("abcd")
    exportador.agregar_hoja("Cola B_T", ("T", "p_hat"), [(1.0, 0.5), (2.0, 0.25)])
    exportador.exportar(str(ruta))
    libro = openpyxl.load_workbook(ruta)
    assert libro.sheetnames == ["Cola B_T", "Configuración"]
    hoja = libro["Cola B_T"]
    assert hoja.cell(row=1, column=2).value == "p_hat"
    assert hoja.cell(row=3, column=2).value == 0.25
    assert hoja.freeze_panes == "A2"
    assert libro["Configuración"].cell(row=1, column=2).value == "abcd"
