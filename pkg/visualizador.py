"""
Tablas de consola con los resultados de cada subcomando
"""
from tabulate import tabulate

ANCHO = 100


def _titulo(texto):
    print("\n" + "=" * ANCHO)
    print(texto)
    print("=" * ANCHO)


class VisualizadorResultados:
    """Imprime resúmenes en tablas; stdout queda reservado para ellos"""

    def mostrar_eventos(self, registros, inicio=0, cantidad=20, mostrar_ultima=True):
        """
        Muestra un tramo del registro de eventos
        inicio: índice desde donde comenzar
        cantidad: eventos a mostrar
        mostrar_ultima: si True, también muestra el último evento
        """
        indices = list(range(inicio, min(inicio + cantidad, len(registros))))
        if mostrar_ultima and registros and len(registros) - 1 not in indices:
            indices.append(len(registros) - 1)

        tabla = []
        for idx in indices:
            r = registros[idx]
            tabla.append([idx, f"{r.tiempo:.6f}", r.indice, r.superficie.value, r.mitad.value,
                          f"{r.s_pre:.4f}", f"{r.s_post:.4f}", f"{r.omega_pre:.4f}", f"{r.omega_post:.4f}"])

        _titulo("REGISTRO DE EVENTOS")
        print(tabulate(tabla, headers=["#", "t", "i", "superficie", "mitad", "s pre", "s post",
                                       "omega pre", "omega post"], tablefmt="grid"))

    def mostrar_conteos(self, acumuladores, reloj):
        _titulo("CONTEOS DE EVENTOS")
        tabla = [[clave.replace("_", " "), valor] for clave, valor in acumuladores.items()]
        tabla.append(["reloj final", f"{reloj:.6f}"])
        print(tabulate(tabla, tablefmt="simple"))

    def mostrar_verificaciones(self, verificaciones):
        _titulo("VALIDACIÓN")
        tabla = [[v.nombre, f"{v.valor:.6g}", v.criterio, "OK" if v.aprobada else "FALLA"] for v in verificaciones]
        print(tabulate(tabla, headers=["verificación", "valor", "criterio", "resultado"], tablefmt="grid"))

    def mostrar_cola(self, curva, ajuste=None):
        _titulo("COLA B_T")
        tabla = [[f"{T:.4g}", f"{p:.4e}", f"{lo:.4e}", f"{hi:.4e}", int(k)]
                 for T, p, lo, hi, k in zip(curva.T_grid, curva.p_hat, curva.ci_inferior,
                                            curva.ci_superior, curva.conteos)]
        print(tabulate(tabla, headers=["T", "p_hat", "ci_lo", "ci_hi", "conteo"], tablefmt="simple"))
        if ajuste is not None:
            print(f"\nExponente: {ajuste.exponente:.4f} ± {ajuste.error:.4f} "
                  f"(T en [{ajuste.T_min:.4g}, {ajuste.T_max:.4g}], {ajuste.puntos} puntos, n={curva.n})")

    def mostrar_flujo(self, filas):
        _titulo("FLUJO DE CALOR POR RESERVORIO")
        tabla = [[f.mitad.value, f"{f.absorbida:.6g}", f"{f.emitida:.6g}", f"{f.tasa_neta:.6g}",
                  f"{f.error:.3g}", f.eventos] for f in filas]
        print(tabulate(tabla, headers=["reservorio", "absorbida", "emitida", "tasa neta", "error", "eventos"],
                       tablefmt="grid"))

    def mostrar_cotas(self, comparaciones):
        """comparaciones: (informe, estimación MC o None)"""
        _titulo("COTAS Y SUS ESTIMACIONES MONTE CARLO")
        tabla = []
        for informe, estimacion in comparaciones:
            if estimacion is None:
                tabla.append([informe.nombre, f"{informe.valor:.6g}", "-", "-", "-"])
            else:
                tabla.append([informe.nombre, f"{informe.valor:.6g}", f"{estimacion.media:.6g}",
                              f"{estimacion.error:.3g}",
                              "OK" if informe.valor >= estimacion.cota_superior() else "FALLA"])
        print(tabulate(tabla, headers=["cota", "valor", "media MC", "error MC", "domina"], tablefmt="grid"))

    def mostrar_mezcla(self, evolucion, ajuste):
        _titulo("MEZCLA DEL ENSAMBLE PERTURBADO")
        tabla = [[f"{t:.4g}", f"{l:.5g}", f"{m:.5g}", f"{l - m:.4e}"]
                 for t, l, m in zip(evolucion.tiempos, evolucion.lambda_t, evolucion.mu_t)]
        print(tabulate(tabla, headers=["t", "lambda_t", "mu_t", "r(t)"], tablefmt="simple"))
        if ajuste is not None:
            print(f"\nPendiente log-log: {ajuste.pendiente_loglog:.3f} ± {ajuste.error_pendiente:.3f}; "
                  f"residuo potencia {ajuste.residuo_potencia:.4g} vs exponencial {ajuste.residuo_exponencial:.4g}; "
                  f"convexa: {'sí' if ajuste.convexa else 'no'}")
